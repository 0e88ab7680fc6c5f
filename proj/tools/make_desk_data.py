#!/usr/bin/env python3
"""Regenerates the bundled desk dataset under data/.

Reviews are assembled from sentence templates around a few food concepts
(noodles, seafood, coffee, ...). Each concept has several single-word
synonyms, so a query and a relevant review often share no literal term.
The word vectors are synthetic: synonyms of one concept sit near a common
random centre, other words get small unrelated vectors. A real GloVe file
can replace them through --embeddings.

A review is relevant to a query when it covers every concept of the query.
Output is fully determined by the seed.
"""

import argparse
import json
import random
from pathlib import Path

CONCEPTS = {
    "noodles": ["noodles", "ramen", "laksa", "udon", "pho", "mee"],
    "spicy": ["spicy", "fiery", "chilli", "peppery", "sambal"],
    "seafood": ["seafood", "fish", "prawns", "crab", "oysters", "shrimp"],
    "chicken": ["chicken", "wings", "drumsticks", "poultry"],
    "dessert": ["dessert", "cake", "pastry", "tart", "pudding", "gelato"],
    "coffee": ["coffee", "latte", "espresso", "cappuccino", "kopi"],
    "vegetarian": ["vegetarian", "vegan", "tofu", "veggies", "greens"],
    "curry": ["curry", "masala", "biryani", "korma", "dal"],
    "cheap": ["cheap", "affordable", "inexpensive", "budget", "economical"],
    "portion": ["portions", "servings", "helpings"],
    "service": ["staff", "waiter", "waitress", "crew", "server"],
    "ambience": ["ambience", "atmosphere", "decor", "vibe", "interior"],
}

DISH_CONCEPTS = ["noodles", "seafood", "chicken", "dessert", "coffee", "vegetarian", "curry"]

SERVICES = [
    ("s1", "Laksa Lane", ["noodles", "spicy", "malay"], "Clementi", ["noodles", "spicy"]),
    ("s2", "Golden Wok", ["chinese", "noodles", "seafood"], "Jurong East", ["noodles", "seafood", "chicken"]),
    ("s3", "Corner Chicken House", ["chicken", "rice", "hawker"], "Boon Lay", ["chicken", "spicy"]),
    ("s4", "Sweet Spot", ["dessert", "bakery"], "Orchard", ["dessert", "coffee"]),
    ("s5", "Bean There", ["cafe", "coffee", "breakfast"], "Tanjong Pagar", ["coffee", "dessert"]),
    ("s6", "Green Leaf", ["vegetarian", "healthy"], "Holland Village", ["vegetarian", "curry"]),
    ("s7", "Ocean Catch", ["seafood", "grill"], "East Coast", ["seafood", "spicy"]),
    ("s8", "Curry House", ["indian", "curry"], "Little India", ["curry", "vegetarian", "chicken", "spicy"]),
]

POSITIVE = ["delicious", "tasty", "excellent", "amazing", "wonderful", "superb"]
NEUTRAL = ["okay", "average", "decent", "ordinary", "alright"]
NEGATIVE = ["bland", "awful", "terrible", "soggy", "disappointing", "stale"]

TEST_QUERIES = [
    ("t1", "affordable ramen", ["cheap", "noodles"]),
    ("t2", "fiery curry", ["spicy", "curry"]),
    ("t3", "vegan food", ["vegetarian"]),
    ("t4", "espresso and pastry", ["coffee", "dessert"]),
    ("t5", "budget seafood", ["cheap", "seafood"]),
    ("t6", "big servings of chicken", ["portion", "chicken"]),
    ("t7", "nice atmosphere for latte", ["ambience", "coffee"]),
    ("t8", "chilli crab", ["spicy", "seafood"]),
    ("t9", "inexpensive wings", ["cheap", "chicken"]),
    ("t10", "friendly waiter serving udon", ["service", "noodles"]),
]

TRAIN_QUERIES = [
    ("q1", "spicy noodles", ["spicy", "noodles"]),
    ("q2", "cheap curry", ["cheap", "curry"]),
    ("q3", "cake and coffee", ["dessert", "coffee"]),
    ("q4", "tofu dishes", ["vegetarian"]),
    ("q5", "grilled fish", ["seafood"]),
    ("q6", "chicken", ["chicken"]),
    ("q7", "lovely decor", ["ambience"]),
    ("q8", "huge portions", ["portion"]),
    ("q9", "attentive staff", ["service"]),
    ("q10", "cappuccino", ["coffee"]),
    ("q11", "gelato dessert", ["dessert"]),
    ("q12", "prawn noodles", ["seafood", "noodles"]),
    ("q13", "biryani", ["curry"]),
    ("q14", "economical pho", ["cheap", "noodles"]),
    ("q15", "peppery chicken", ["spicy", "chicken"]),
    ("q16", "vegetarian masala", ["vegetarian", "curry"]),
    ("q17", "cheap pudding", ["cheap", "dessert"]),
    ("q18", "sambal oysters", ["spicy", "seafood"]),
    ("q19", "kopi with good vibe", ["coffee", "ambience"]),
    ("q20", "generous helpings of noodles", ["portion", "noodles"]),
]

FILLER_POS = ["Will definitely come back.", "Highly recommended to my friends.", "A great find."]
FILLER_NEG = ["Will not return.", "Not worth the trip.", "Sadly a letdown."]
FILLER_ANY = ["We came here for lunch on a weekday.", "My colleagues suggested this place.",
              "It was quite crowded at noon.", "We visited after work."]


def syn(rng, concept):
    return rng.choice(CONCEPTS[concept])


def quality(rng, label):
    if label >= 3:
        return rng.choice(POSITIVE)
    if label == 2:
        return rng.choice(NEUTRAL)
    return rng.choice(NEGATIVE)


def dish_sentence(rng, dish, spicy, q):
    mod = syn(rng, "spicy") + " " if spicy else ""
    d = syn(rng, dish)
    return rng.choice([
        f"The {mod}{d} was {q}.",
        f"I ordered the {mod}{d} and it was {q}.",
        f"Their {mod}{d} is {q}.",
        f"We shared some {q} {mod}{d}.",
    ])


def make_review(rng, idx, service):
    sid, _name, categories, _loc, dishes = service
    label = rng.choices([0, 1, 2, 3, 4], weights=[2, 2, 2, 3, 3])[0]
    concepts = set()
    sentences = []
    picked = rng.sample(dishes, k=min(len(dishes), rng.choice([1, 2])))
    spicy_ok = "spicy" in dishes
    for dish in picked:
        if dish == "spicy":
            continue
        spicy = spicy_ok and rng.random() < 0.45
        sentences.append(dish_sentence(rng, dish, spicy, quality(rng, label)))
        concepts.add(dish)
        if spicy:
            concepts.add("spicy")
    if not concepts:
        dish = rng.choice([d for d in dishes if d != "spicy"])
        sentences.append(dish_sentence(rng, dish, True, quality(rng, label)))
        concepts.update({dish, "spicy"})

    if rng.random() < 0.4:
        if label >= 2:
            sentences.append(rng.choice([f"Prices are {syn(rng, 'cheap')}.",
                                         f"Very {syn(rng, 'cheap')} for what you get."]))
            concepts.add("cheap")
        else:
            sentences.append(rng.choice(["It is rather overpriced.", "Definitely not cheap at all."]))
    if rng.random() < 0.3:
        size = rng.choice(["huge", "generous", "big"]) if label >= 2 else rng.choice(["tiny", "small"])
        sentences.append(f"The {syn(rng, 'portion')} were {size}.")
        if label >= 2:
            concepts.add("portion")
    if rng.random() < 0.3:
        manner = rng.choice(["friendly", "attentive", "polite"]) if label >= 2 else rng.choice(["rude", "slow"])
        sentences.append(f"The {syn(rng, 'service')} was {manner}.")
        concepts.add("service")
    if rng.random() < 0.3:
        feel = rng.choice(["cozy", "relaxing", "charming"]) if label >= 2 else rng.choice(["noisy", "cramped"])
        sentences.append(f"The {syn(rng, 'ambience')} is {feel}.")
        concepts.add("ambience")
    # Literal mention of a concept the review is not about.
    if rng.random() < 0.2:
        other = rng.choice([c for c in DISH_CONCEPTS if c not in concepts])
        sentences.append(f"I wanted {syn(rng, other)} but they had sold out.")
    rng.shuffle(sentences)
    if rng.random() < 0.5:
        sentences.insert(0, rng.choice(FILLER_ANY))
    if label >= 3:
        sentences.append(rng.choice(FILLER_POS))
    elif label <= 1:
        sentences.append(rng.choice(FILLER_NEG))
    review = {
        "id": f"r{idx:03d}",
        "service_id": sid,
        "text": " ".join(sentences),
        "label": label,
        "categories": categories,
        "timestamp": 1_600_000_000 + idx * 86_400 + rng.randrange(0, 3600),
    }
    return review, concepts


def make_vectors(rng, dim, vocabulary):
    centres = {c: [rng.gauss(0.0, 1.0) for _ in range(dim)] for c in CONCEPTS}
    word_concept = {w: c for c, words in CONCEPTS.items() for w in words}
    vectors = {}
    for word in sorted(vocabulary):
        if word in word_concept:
            centre = centres[word_concept[word]]
            vectors[word] = [x + rng.gauss(0.0, 0.35) for x in centre]
        else:
            vectors[word] = [rng.gauss(0.0, 0.25) for _ in range(dim)]
    return vectors


def tokens(text):
    out, cur = [], []
    for ch in text.lower():
        if ch.isalnum():
            cur.append(ch)
        elif cur:
            out.append("".join(cur))
            cur = []
    if cur:
        out.append("".join(cur))
    return out


def judgments_for(queries, reviews, concepts_of, rng, pool_size):
    rows = []
    for qid, text, needed in queries:
        qtok = set(tokens(text))
        relevant = [r["id"] for r in reviews if set(needed) <= concepts_of[r["id"]]]
        others = [r for r in reviews if r["id"] not in relevant]
        # Hard negatives first: literal overlap or shared concepts.
        others.sort(key=lambda r: (-(len(qtok & set(tokens(r["text"]))) * 2
                                     + len(set(needed) & concepts_of[r["id"]])), r["id"]))
        hard = [r["id"] for r in others[:pool_size]]
        for doc in sorted(relevant):
            rows.append((qid, doc, 1))
        for doc in sorted(hard):
            rows.append((qid, doc, 0))
        if not relevant:
            raise SystemExit(f"query {qid} has no relevant review; adjust the generator")
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--per-service", type=int, default=20)
    ap.add_argument("--dim", type=int, default=50)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    reviews, concepts_of = [], {}
    idx = 1
    for service in SERVICES:
        for _ in range(args.per_service):
            review, concepts = make_review(rng, idx, service)
            reviews.append(review)
            concepts_of[review["id"]] = concepts
            idx += 1

    with open(out / "services.jsonl", "w") as f:
        for sid, name, cats, loc, _ in SERVICES:
            f.write(json.dumps({"id": sid, "name": name, "categories": cats, "location": loc}) + "\n")
    with open(out / "reviews.jsonl", "w") as f:
        for r in reviews:
            f.write(json.dumps(r) + "\n")

    vocabulary = set()
    for r in reviews:
        vocabulary.update(tokens(r["text"]))
    for _, text, _ in TEST_QUERIES + TRAIN_QUERIES:
        vocabulary.update(tokens(text))
    for words in CONCEPTS.values():
        vocabulary.update(words)
    vectors = make_vectors(rng, args.dim, vocabulary)
    with open(out / "embeddings.txt", "w") as f:
        for word, vec in vectors.items():
            f.write(word + " " + " ".join(f"{x:.5f}" for x in vec) + "\n")

    for name, queries in (("queries.tsv", TEST_QUERIES), ("train_queries.tsv", TRAIN_QUERIES)):
        with open(out / name, "w") as f:
            for qid, text, _ in queries:
                f.write(f"{qid}\t{text}\n")
    for name, queries in (("judgments.tsv", TEST_QUERIES), ("train_judgments.tsv", TRAIN_QUERIES)):
        with open(out / name, "w") as f:
            for qid, doc, label in judgments_for(queries, reviews, concepts_of, rng, pool_size=15):
                f.write(f"{qid}\t{doc}\t{label}\n")


if __name__ == "__main__":
    main()
