#!/usr/bin/env python3
"""Generate the bundled two-period mini corpus under tests/fixtures/.

Deterministic (seeded) so the committed fixture can be regenerated
byte-identically. The corpus plants the phenomena the test suite asserts:

- replacement pairs with a frequency crossover (gerek/mucip, yil/sene,
  belge/vesika, numara/sayi)
- a word present only in the late period (televizyon) sharing contexts with
  an early-period counterpart (radyo) for aligned-neighbor recovery
- a stationary word (kanun) and a context-swapped word (piyasa) for
  semantic-change ordering
- soft/hard final-consonant spelling pairs with a declining soft share
  (kitab/kitap, mektub/mektup, ahmed/ahmet, aded/adet)
- circumflexed spellings that fade (kagit, resmi/resmî, milli/millî,
  hükûmet/hükümet)
- low-frequency noise words and numeric tokens that the threshold and
  alphabetic filters must drop

Token budgets keep each period's raw token count N in (5000, 7500] so that
with threshold divisor 2500 the frequency threshold is exactly 3.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from pathlib import Path

FIXTURE_ROOT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
CORPUS_ROOT = FIXTURE_ROOT / "mini_corpus"

SEED = 7219
DOCS_PER_PERIOD = 50
SCALE = 2  # repeat multiplier for non-noise sentences (keeps N in the threshold band)

# Sentence inventories: (repeat count, words). Rendered with the first word
# capitalized and the final period attached to the last word.
SENTENCES_1930 = [
    # media frames anchored on radyo (televizyon intentionally absent)
    (30, "radyo yayın haber için karar verildi"),
    (15, "sinema tiyatro müzik yayın haber"),
    (15, "radyo müzik yayın millet için"),
    # stationary legal frames, identical in both periods
    (40, "kanun madde devlet meclis karar"),
    (30, "devlet millet meclis kanun madde"),
    # piyasa rides the media cluster here and the legal cluster in the 1980s;
    # both clusters are anchored by their own mass, so the alignment cannot
    # bend one onto the other and the word's vector visibly moves
    (35, "piyasa radyo yayın haber müzik"),
    (12, "buğday fiyat köylü üretim kayıt"),
    # replacement pairs: sene/mucip/vesika/sayı dominant, gerek/belge rare
    (45, "bu sene mucip sebep görüldü"),
    (40, "mucip sebep ile vesika verildi"),
    (35, "bu sene vesika ile kayıt verildi"),
    (20, "bu sene mucip karar verildi"),
    (18, "gerek görülen madde için karar"),
    (10, "bu belge ile kayıt verildi"),
    (25, "sayı ile kayıt verildi"),
    # final-consonant spelling variants, soft forms still common
    (20, "ahmed bey kitab aldı"),
    (15, "ahmet bey kitap aldı"),
    (12, "mektub aded ile kayıt"),
    (10, "mektup adet ile kayıt"),
    (10, "kitab mektub için kayıt"),
    # circumflex-heavy spellings
    (25, "kâğıt üzerine resmî kayıt yapıldı"),
    (20, "millî hükûmet resmî karar verdi"),
    # sentence-initial capitalization exercises Turkish case folding
    (10, "istanbul için haber verildi"),
    # numeric tokens: removed by the alphabetic filter
    (6, "1931 tarihli kanun madde"),
]
NOISE_1930 = [
    (2, "tnbil kayıt için karar"),
    (1, "vrka haber"),
]

SENTENCES_1980 = [
    # televizyon takes over radyo's frames; radyo survives alongside
    (30, "televizyon yayın haber için karar verildi"),
    (12, "sinema tiyatro müzik yayın haber"),
    (12, "radyo televizyon yayın müzik haber"),
    (10, "televizyon müzik yayın millet için"),
    # stationary legal frames (verbatim copies of the 1930s ones)
    (40, "kanun madde devlet meclis karar"),
    (30, "devlet millet meclis kanun madde"),
    # piyasa now lives among the legal anchors
    (35, "piyasa kanun madde meclis karar"),
    (12, "borsa döviz faiz kredi kayıt"),
    # replacement pairs flipped: yıl/gerek/belge/numara dominant
    (50, "bu yıl gerek görülen belge verildi"),
    (40, "gerek görülen belge ile kayıt verildi"),
    (40, "bu yıl gerek karar verildi"),
    (25, "bu yıl belge ile kayıt"),
    (6, "bu sene karar verildi"),
    (6, "sayı ile kayıt verildi"),
    (25, "numara ile kayıt verildi"),
    # spelling variants: hard forms now dominate
    (5, "ahmed bey kitab aldı"),
    (45, "ahmet bey kitap aldı"),
    (4, "mektub aded ile kayıt"),
    (30, "mektup adet ile kayıt"),
    # circumflex fading
    (5, "kâğıt üzerine resmî kayıt yapıldı"),
    (40, "milli hükümet resmi karar verdi"),
    (10, "istanbul için haber verildi"),
    (6, "1981 tarihli kanun madde"),
]
NOISE_1980 = [
    (2, "gzte kayıt için karar"),
    (1, "blten haber"),
]

# Words that must not leak into the other period.
ONLY_1930 = {"mucip", "vesika", "buğday", "fiyat", "köylü", "üretim", "hükûmet", "millî"}
ONLY_1980 = {"yıl", "televizyon", "borsa", "döviz", "faiz", "kredi", "hükümet", "milli", "numara"}


def turkish_capitalize(word: str) -> str:
    head = word[0]
    if head == "i":
        return "İ" + word[1:]
    if head == "ı":
        return "I" + word[1:]
    return head.upper() + word[1:]


def build_sentences(inventory, noise, rng: random.Random) -> list[str]:
    sentences: list[str] = []
    for repeat, words in inventory:
        sentences.extend([words] * (repeat * SCALE))
    for repeat, words in noise:
        sentences.extend([words] * repeat)
    rng.shuffle(sentences)
    return sentences


def render(words: str) -> str:
    parts = words.split()
    parts[0] = turkish_capitalize(parts[0])
    return " ".join(parts) + "."


def token_count(sentences: list[str]) -> int:
    # each sentence tokenizes into its words plus the detached final period
    return sum(len(s.split()) + 1 for s in sentences)


def word_counts(sentences: list[str]) -> Counter:
    counts: Counter = Counter()
    for s in sentences:
        counts.update(s.split())
    return counts


def deal_documents(sentences: list[str], doc_count: int) -> list[str]:
    docs: list[list[str]] = [[] for _ in range(doc_count)]
    for i, sentence in enumerate(sentences):
        docs[i % doc_count].append(render(sentence))
    return ["\n".join(doc) + "\n" for doc in docs]


def main() -> None:
    rng = random.Random(SEED)
    s1930 = build_sentences(SENTENCES_1930, NOISE_1930, rng)
    s1980 = build_sentences(SENTENCES_1980, NOISE_1980, rng)

    n1930, n1980 = token_count(s1930), token_count(s1980)
    for name, n in (("1930s", n1930), ("1980s", n1980)):
        assert 5000 < n <= 7500, f"{name} token count {n} leaves the threshold band"

    c1930, c1980 = word_counts(s1930), word_counts(s1980)
    for word in ONLY_1930:
        assert c1930[word] >= 3 and c1980[word] == 0, word
    for word in ONLY_1980:
        assert c1980[word] >= 3 and c1930[word] == 0, word
    for counts, noise in ((c1930, NOISE_1930), (c1980, NOISE_1980)):
        for repeat, words in noise:
            assert counts[words.split()[0]] < 3, words
    # every planted non-noise, non-numeric word must clear the threshold
    noise_words = {w.split()[0] for _, w in NOISE_1930 + NOISE_1980}
    for counts in (c1930, c1980):
        for word, freq in counts.items():
            if word in noise_words or not word.isalpha():
                continue
            assert freq >= 3, f"{word} has frequency {freq} and would be filtered"

    docs_dir = CORPUS_ROOT / "docs"
    docs_dir.mkdir(parents=True, exist_ok=True)
    manifest = []
    vocabulary: set[str] = set()
    for start_year, sentences, tag in ((1930, s1930, "g"), (1980, s1980, "a")):
        texts = deal_documents(sentences, DOCS_PER_PERIOD)
        vocabulary.update(word_counts(sentences))
        for i, text in enumerate(texts):
            year = start_year + (i % 10)
            doc_id = f"doc-{start_year}s-{i:03d}"
            (docs_dir / f"{doc_id}.txt").write_text(text, encoding="utf-8")
            manifest.append(
                {
                    "id": doc_id,
                    "date": f"{year}-{1 + (i * 5) % 12:02d}-{1 + (i * 7) % 28:02d}",
                    "source": "gazette" if (tag == "g") == (i % 2 == 0) else "assembly",
                    "path": f"docs/{doc_id}.txt",
                }
            )
    (CORPUS_ROOT / "manifest.json").write_text(
        json.dumps(manifest, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )

    # identity analyzer entries for every fixture word longer than 5 letters,
    # so surfaces survive as lemmas instead of being F5-truncated
    rows = sorted(w for w in vocabulary if len(w) > 5 and w.isalpha())
    (FIXTURE_ROOT / "analyzer_stub.tsv").write_text(
        "".join(f"{w}\t{w}\n" for w in rows), encoding="utf-8"
    )

    print(f"1930s: {len(s1930)} sentences, {n1930} tokens")
    print(f"1980s: {len(s1980)} sentences, {n1980} tokens")
    print(f"manifest: {len(manifest)} documents")
    print(f"analyzer entries: {len(rows)}")


if __name__ == "__main__":
    main()
