"""Regenerates tests/fixtures/corpus: five synthetic speakers sharing a common
English vocabulary, each with a private word list that makes up part of its
tokens. Deterministic for a fixed seed."""

import argparse
import pathlib
import random

COMMON = """
the and to of i you a my in that is not with it me be his your this but he
have as thou so him will what thy all her no by do shall if are we our on
thee lord now good come let from at they or more would how sir was well know
here love then there like man upon may make than one did hath should must
when say go see us can why for which who yet out such night day hand heart
time life death eye world name speak tell give take think these those where
""".split()

SPEAKERS = {
    "admiral": """sea ship storm sail anchor wave tide harbour mast captain crew
        deck wind salt voyage shore coast fleet rope north compass gale current
        oar hull keel starboard port fathom""".split(),
    "gardener": """rose thorn root seed leaf bloom garden spade weed soil rain
        orchard apple blossom hedge petal vine grow prune harvest field meadow
        clover moss willow barley""".split(),
    "jester": """fool jest riddle laugh merry cap bell jig motley wit folly
        prank giggle tickle juggle tumble caper quip jolly zany puzzle dizzy
        fizz buzz""".split(),
    "queen": """crown throne realm majesty royal court kingdom sceptre subject
        noble duty honour decree herald banner palace velvet jewel queenly
        reign grace treaty""".split(),
    "soldier": """sword shield battle arrow spear march camp siege trench helm
        armour drum banner enemy charge wound valour cannon flank rampart
        musket bugle""".split(),
}

PUNCT = [",", ",", ".", ".", "!", "?", ";", ":", " --"]


def zipf_weights(n, s=1.1):
    return [1.0 / (r + 1) ** s for r in range(n)]


def speaker_text(rng, private, target_bytes, private_share):
    common_w = zipf_weights(len(COMMON))
    private_w = zipf_weights(len(private), 0.8)
    lines = []
    size = 0
    while size < target_bytes:
        words = []
        for _ in range(rng.randint(5, 14)):
            pool, weights = (private, private_w) if rng.random() < private_share else (COMMON, common_w)
            words.append(rng.choices(pool, weights)[0])
        words[0] = words[0].capitalize()
        line = " ".join(words)
        if rng.random() < 0.15:
            line = line.replace(" is ", "'s ", 1)
        line += rng.choice(PUNCT)
        lines.append(line)
        size += len(line) + 1
    return "\n".join(lines) + "\n"


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=str(pathlib.Path(__file__).parent / "corpus"))
    parser.add_argument("--seed", type=int, default=20240601)
    parser.add_argument("--bytes", type=int, default=30000)
    parser.add_argument("--private-share", type=float, default=0.04)
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    for name in sorted(SPEAKERS):
        text = speaker_text(rng, SPEAKERS[name], args.bytes, args.private_share)
        (out / f"{name}.txt").write_text(text)


if __name__ == "__main__":
    main()
