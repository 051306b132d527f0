#!/usr/bin/env python3
"""Generate the bundled synthetic corpus under data/corpus/.

The output is deterministic for a given seed. It contains three subject
categories, profile and author-only people, name variants that exercise the
author/profile matcher (including one planted tie), a profile friendship
network and planted expert labels.
"""

import argparse
import pathlib
import random

CATEGORIES = [
    ("information_retrieval", "information retrieval",
     ["information retrieval", "search engines", "hcir", "retrieval",
      "relevance feedback", "ranking", "query logs", "recommender systems",
      "information seeking", "exploratory search"]),
    ("machine_learning", "machine learning",
     ["machine learning", "neural networks", "classification",
      "deep learning", "clustering", "decision trees", "reinforcement learning",
      "feature selection"]),
    ("databases", "databases",
     ["databases", "query processing", "transactions", "sql",
      "storage engines", "data integration", "concurrency control",
      "schema matching"]),
]

JOURNALS = [
    ("Journal of the ACM", 0.95),
    ("ACM Transactions on Information Systems", 0.9),
    ("Information Retrieval Journal", 0.7),
    ("Machine Learning", 0.85),
    ("Journal of Machine Learning Research", 0.92),
    ("VLDB Journal", 0.88),
    ("Data and Knowledge Engineering", 0.55),
    ("Information Processing and Management", 0.65),
    ("Workshop Notes", 0.2),
]

FIRST = ["Ada", "Boris", "Chen", "Dana", "Elif", "Farid", "Greta", "Hugo",
         "Ines", "Jonas", "Kira", "Luca", "Mira", "Nadia", "Oren", "Priya",
         "Quinn", "Rosa", "Samir", "Tova", "Uma", "Viktor", "Wen", "Ximena",
         "Yusuf", "Zara", "Amos", "Bea", "Cyrus", "Dalia"]
LAST = ["Lovelace", "Petrov", "Wang", "Cohen", "Kaya", "Haddad", "Berg",
        "Moreau", "Silva", "Lind", "Tanaka", "Rossi", "Levi", "Nowak",
        "Shapiro", "Raman", "Hale", "Ortiz", "Nasser", "Adler", "Iyer",
        "Novak", "Zhou", "Reyes", "Demir", "Amari", "Katz", "Brandt",
        "Farah", "Galil"]

STATUSES = ["professor", "postdoc", "phd_student", "other"]


def levenshtein(a, b):
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def make_people(rng):
    # Names are kept far apart so only the planted variants need resolving.
    people = []
    reserved = ["jon smith", "ron smit", "lena quist", "omar vidal"]
    candidates = [f"{f} {l}" for f in FIRST for l in LAST]
    rng.shuffle(candidates)
    for name in candidates:
        key = name.lower()
        if any(levenshtein(key, o.lower()) / max(len(key), len(o)) <= 0.4
               for o in people + reserved):
            continue
        people.append(name)
        if len(people) == 56:
            return people
    raise RuntimeError("not enough well-separated names")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=31)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parents[1] / "data" / "corpus"))
    args = ap.parse_args()
    rng = random.Random(args.seed)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    people = make_people(rng)
    # The first 46 people have profiles; the rest appear only as authors.
    profiled = people[:46]
    status = {}
    for i, name in enumerate(people):
        status[name] = STATUSES[i % 4] if i >= 12 else ("professor" if i % 3 else "postdoc")

    # Category membership and hidden expertise.
    members = {}
    expertise = {}
    for ci, (cid, _, _) in enumerate(CATEGORIES):
        pool = people[ci * 14:ci * 14 + 24] if ci < 2 else people[28:] + people[:2]
        members[cid] = pool
        for rank, name in enumerate(pool):
            expertise[(cid, name)] = 1.0 / (1.0 + rank * 0.45)

    publications = []
    pid = 0
    for cid, _, _ in CATEGORIES:
        pool = members[cid]
        weights = [expertise[(cid, n)] for n in pool]
        for _ in range(40):
            lead = rng.choices(pool, weights=weights)[0]
            k = rng.choice([1, 2, 2, 3, 3, 4])
            authors = [lead]
            while len(authors) < k:
                a = rng.choices(pool, weights=weights)[0]
                if a not in authors:
                    authors.append(a)
            e = expertise[(cid, lead)]
            readers = int(rng.lognormvariate(2.0 + 2.5 * e, 0.5))
            if rng.random() < 0.12:
                journal = ""
            else:
                ranked = sorted(JOURNALS, key=lambda j: -j[1])
                idx = min(len(ranked) - 1, int(rng.expovariate(1.0) * (1.5 / e)))
                journal = ranked[idx][0]
            hist = {}
            remaining = readers
            for s in STATUSES[:-1]:
                c = rng.randint(0, remaining)
                if c:
                    hist[s] = c
                remaining -= c
            pid += 1
            publications.append({
                "id": f"pub{pid:03d}",
                "title": f"{rng.choice(['On', 'Towards', 'Revisiting', 'Scaling'])} "
                         f"{rng.choice(CATEGORIES[[c[0] for c in CATEGORIES].index(cid)][2])} "
                         f"{rng.choice(['models', 'systems', 'evaluation', 'methods'])}",
                "authors": authors,
                "canonical": list(authors),
                "journal": journal,
                "category": cid,
                "readers": readers,
                "hist": hist,
            })

    # Author-name variants resolved by edit distance.
    variant = {}
    for name in profiled[5:15:3]:
        first, last = name.split(" ", 1)
        variant[name] = f"{first[0]}. {last}" if len(first) <= 4 else f"{first}  {last}"
    for p in publications:
        p["authors"] = [variant.get(a, a) if rng.random() < 0.5 else a for a in p["authors"]]

    # Planted tie: author "Jon Smit" sits at distance 1 from two profiles.
    publications.append({
        "id": "pub900", "title": "Ties in author resolution",
        "authors": ["Jon Smit", people[30]], "canonical": [], "journal": "Workshop Notes",
        "category": "databases", "readers": 3, "hist": {"phd_student": 1},
    })

    with open(out / "profiles.txt", "w") as f:
        f.write("# profile_id|display_name|status|source|interests\n")
        for i, name in enumerate(profiled):
            source = "academia" if i % 5 == 4 else "mendeley"
            interests = [c[1] for c in CATEGORIES if name in members[c[0]]]
            f.write(f"u{i:03d}|{name}|{status[name]}|{source}|{';'.join(interests)}\n")
        f.write("u900|Jon Smith|phd_student|mendeley|databases\n")
        f.write("u901|Ron Smit|other|academia|\n")
        # Profile-only members without publications.
        f.write("u950|Lena Quist|phd_student|mendeley|information retrieval\n")
        f.write("u951|Omar Vidal|other|academia|\n")

    with open(out / "publications.txt", "w") as f:
        f.write("# pub_id|title|authors|journal|category_id|reader_count|histogram\n")
        for p in publications:
            hist = ";".join(f"{s}:{c}" for s, c in p["hist"].items())
            f.write(f"{p['id']}|{p['title']}|{';'.join(p['authors'])}|{p['journal']}|"
                    f"{p['category']}|{p['readers']}|{hist}\n")

    ids = {name: f"u{i:03d}" for i, name in enumerate(profiled)}
    edges = set()
    prof_names = list(ids)
    while len(edges) < 70:
        a, b = rng.sample(prof_names, 2)
        # Friends tend to share a category.
        if not any(a in m and b in m for m in members.values()) and rng.random() < 0.7:
            continue
        edges.add(tuple(sorted((ids[a], ids[b]))))
    edges.add(("u950", ids[members["information_retrieval"][0]]))
    with open(out / "edges.txt", "w") as f:
        f.write("# id_a,id_b\n")
        for a, b in sorted(edges):
            f.write(f"{a},{b}\n")

    with open(out / "journals.txt", "w") as f:
        f.write("# journal_name,rank\n")
        for name, rank in JOURNALS:
            f.write(f"{name},{rank}\n")

    with open(out / "taxonomy.txt", "w") as f:
        f.write("# category_id|label|vocabulary\n")
        for cid, label, vocab in CATEGORIES:
            f.write(f"{cid}|{label}|{';'.join(vocab)}\n")

    with open(out / "labels.txt", "w") as f:
        f.write("# person_ref,category_id,is_expert\n")
        for cid, _, _ in CATEGORIES:
            authored = {a for p in publications if p["category"] == cid for a in p["canonical"]}
            for rank, name in enumerate(members[cid]):
                if name not in authored:
                    continue
                ref = ids.get(name, name)
                f.write(f"{ref},{cid},{1 if rank < 4 else 0}\n")


if __name__ == "__main__":
    main()
