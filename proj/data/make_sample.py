"""Regenerates sample_corpus.txt and sample_embeddings.txt (seeded, stdlib only)."""
import random

rng = random.Random(20240611)

NOUNS = ["house", "dog", "city", "river", "problem", "tree", "ship", "crowd", "storm", "garden",
         "mountain", "book", "window", "market", "field", "idea", "table", "road", "bridge", "wave"]
# Successor preferences of the three size adjectives: overlapping, not identical.
WEIGHTS = {
    "big": [9, 8, 6, 3, 7, 5, 4, 3, 2, 2, 2, 3, 2, 4, 2, 5, 3, 2, 2, 1],
    "large": [8, 5, 7, 4, 3, 5, 6, 5, 1, 3, 3, 2, 3, 4, 4, 2, 4, 2, 3, 1],
    "huge": [5, 3, 6, 5, 4, 4, 5, 6, 6, 1, 5, 1, 1, 2, 2, 3, 1, 1, 2, 5],
}
OTHER_ADJ = ["small", "old", "quiet", "green", "bright", "narrow", "distant", "busy"]
VERBS = ["saw", "crossed", "built", "found", "watched", "left", "painted", "followed", "reached", "passed"]
SUBJECTS = ["The traveller", "A child", "My neighbour", "The old sailor", "Nobody", "Everyone", "She", "He", "They"]
PLACES = ["at dawn", "in the rain", "by the harbour", "near the hills", "after supper", "before the fair"]


def noun_phrase():
    r = rng.random()
    if r < 0.35:
        adj = rng.choices(list(WEIGHTS), weights=[5, 3, 2])[0]
        noun = rng.choices(NOUNS, weights=WEIGHTS[adj])[0]
        det = rng.choice(["the", "a", "that"])
        word = adj.capitalize() if det == "that" and rng.random() < 0.1 else adj
        return f"{det} {word} {noun}"
    if r < 0.7:
        return f"the {rng.choice(OTHER_ADJ)} {rng.choice(NOUNS)}"
    return f"the {rng.choice(NOUNS)}"


def sentence():
    s = f"{rng.choice(SUBJECTS)} {rng.choice(VERBS)} {noun_phrase()}"
    if rng.random() < 0.5:
        s += f" {rng.choice(PLACES)}"
    if rng.random() < 0.4:
        s += f", and then {rng.choice(VERBS)} {noun_phrase()}"
    return s + rng.choice([".", ".", ".", "!", "?"])


paragraphs = []
for _ in range(400):
    paragraphs.append(" ".join(sentence() for _ in range(rng.randint(4, 9))))
with open("sample_corpus.txt", "w", encoding="utf-8") as f:
    f.write("\n\n".join(paragraphs) + "\n")

DIM = 8
base = [rng.gauss(0, 1) for _ in range(DIM)]
vectors = {}
for word, noise in [("big", 0.30), ("large", 0.35), ("huge", 0.55)]:
    vectors[word] = [b + rng.gauss(0, noise) for b in base]
for word in OTHER_ADJ + NOUNS[:6]:
    vectors[word] = [rng.gauss(0, 1) for _ in range(DIM)]
with open("sample_embeddings.txt", "w", encoding="utf-8") as f:
    f.write(f"{len(vectors)} {DIM}\n")
    for word, v in vectors.items():
        f.write(word + " " + " ".join(f"{x:.6f}" for x in v) + "\n")
