#!/usr/bin/env python3
"""Generate fixtures/af_sample.txt, the repo's training corpus.

Simple-Afrikaans prose written from hand-picked word pools and sentence
templates, so the file is original to this repository and freely
redistributable. Deterministic: same seed, same bytes. Paragraphs are
wrapped at 72 columns to exercise soft-wrap normalization.
"""

from __future__ import annotations

import sys
import textwrap
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from versesmith.rng import Rng

NOUNS = """
see berg stad lug wind water skip boom huis kind vrou man voël lied droom
nag dag son maan ster reën wolk pad rivier veld blom vis hond kat deur
venster tafel stoel boek brief stem hart hand oog gesig strand golf klip
gras vuur skaduwee môre aand winter somer herfs lente dorp straat brug
toring kerk mark tuin hek muur dak kamer spieël lamp bed koffie brood
appel wyn melk seil anker net meeu kraai uil perd skaap bees eik wortel
blaar saad stof rook mis ys sneeu donder storm stilte geluid woord naam
verhaal gedig musiek klank asem bloed been vel mond tand voet skouer rug
knie vlam kers sand skulp boot visser net lantern pen papier koerant
hemel aarde grond akker bos woud heuwel vallei fontein put emmer tou
leer vloer plafon gordyn sleutel slot klok horlosie skoen hoed jas
""".split()

VERBS = """
praat sing loop staan val vlieg swem droom kyk luister wag kom gaan bring
dra skryf lees vertel fluister skyn brand groei breek open sluit dans
spring draai rol gly klim daal styg vloei drup waai beweeg rus slaap
ontwaak soek vind verloor onthou vergeet ken weet voel ruik proe hoor
sien roep antwoord vra wys gee neem hou gooi vang bou grawe plant sny
verf teken tel meet lag huil glimlag sug hoes asemhaal wieg skommel
flikker glinster skitter
""".split()

ADJECTIVES = """
stil groot klein blou groen rooi geel grys wit swart donker helder koud
warm oud jonk sag hard swaar lig nat droog vol leeg diep vlak hoog laag
lank kort breed smal vinnig stadig mooi vreemd bekend verlore eensaam
rustig wild kalm skerp soet suur bitter vars moeg wakker bly hartseer
bang dapper stukkend heel glad grof dun dik
""".split()

ADVERBS = """
vanaand vandag gister altyd nooit soms weer stadig saggies versigtig
skielik later vroeg laat buite binne ver naby oral êrens
""".split()

PREPOSITIONS = "in op onder oor deur na van by teen langs agter voor tussen bo".split()

NAMES = "anna jan maria pieter lena danie sarel elsa karel miemie".split()

TEMPLATES = [
    "Die {n} {v} {p} die {n2}.",
    "Die {a} {n} {v} {adv}.",
    "{name} {v} die {n} {p} die {n2}.",
    "'n {a} {n} {v} in die {n2}.",
    "Die {n} van die {n2} {v} {adv}.",
    "{Adv} {v} die {n}.",
    "Die {n} {v} en die {n2} {v2}.",
    "Waar is die {a} {n}?",
    "Hoekom {v} die {n} {adv}?",
    "Die {n} {v} soos 'n {n2}.",
    "Kyk hoe {v} die {n} {p} die {n2}.",
    "Die {n} is {a} en {a2}.",
    "{name} en {name2} {v} na die {n}.",
    "Daar is 'n {a} {n} {p} die {n2}.",
    "Die {n} {v} nie {adv} nie.",
    "Die {a} {n} {v}!",
    "Die {n} {v} {adv}, maar die {n2} {v2} {adv2}.",
    "In die {n} {v} 'n {a} {n2}.",
    "Die {n} {v} stadig…",
    "{name} onthou die {n} van die {a} {n2}.",
]

SENTENCES_TARGET = 2000
SEED = 20260810


def pick(rng: Rng, pool: list[str]) -> str:
    return pool[int(rng.raw(1)[0] % len(pool))]


def fill(rng: Rng, template: str) -> str:
    n = pick(rng, NOUNS)
    n2 = pick(rng, [x for x in NOUNS if x != n])
    name = pick(rng, NAMES).capitalize()
    name2 = pick(rng, [x for x in NAMES if x != name.lower()]).capitalize()
    adv = pick(rng, ADVERBS)
    adv2 = pick(rng, [x for x in ADVERBS if x != adv])
    a = pick(rng, ADJECTIVES)
    a2 = pick(rng, [x for x in ADJECTIVES if x != a])
    v = pick(rng, VERBS)
    v2 = pick(rng, [x for x in VERBS if x != v])
    return template.format(
        n=n, n2=n2, v=v, v2=v2, a=a, a2=a2, adv=adv, adv2=adv2,
        Adv=adv.capitalize(), name=name, name2=name2, p=pick(rng, PREPOSITIONS),
    )


def main() -> None:
    rng = Rng(SEED)
    paragraphs = []
    sentences_done = 0
    while sentences_done < SENTENCES_TARGET:
        size = 3 + int(rng.raw(1)[0] % 5)
        size = min(size, SENTENCES_TARGET - sentences_done)
        sentences = [fill(rng, TEMPLATES[int(rng.raw(1)[0] % len(TEMPLATES))])
                     for _ in range(size)]
        paragraphs.append(textwrap.fill(" ".join(sentences), width=72))
        sentences_done += size
    out = Path(__file__).resolve().parents[1] / "fixtures" / "af_sample.txt"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n\n".join(paragraphs) + "\n", encoding="utf-8")
    print(f"wrote {out}: {sentences_done} sentences, {len(paragraphs)} paragraphs")


if __name__ == "__main__":
    main()
