"""Compare the layer algorithm and the splitting decompositions against the
brute-force oracle on a seeded random corpus.

    python3 scripts/verify_corpus.py --n 200 --seed 0
"""

import argparse
import time
from collections import Counter

from hybridasp.corpus import CorpusConfig, generate_corpus
from hybridasp.incremental import enumerate_all
from hybridasp.oracle import brute_force_answer_sets
from hybridasp.splitting import prefix_sequence, theorem1_solutions, theorem2_solutions
from hybridasp.syntax import serialize_program


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-facts", type=int, default=CorpusConfig.max_facts)
    ap.add_argument("--splitting", action="store_true", help="also assemble answer sets from splitting sets")
    ap.add_argument("--show-failures", action="store_true")
    args = ap.parse_args()

    cfg = CorpusConfig(max_facts=args.max_facts)
    start = time.perf_counter()
    corpus = generate_corpus(args.n, args.seed, cfg)
    sizes = Counter()
    failures = []
    for c in corpus:
        oracle = brute_force_answer_sets(c.program, c.init, universe=c.universe)
        sizes[len(oracle)] += 1
        ok = set(enumerate_all(c.program, c.init, c.horizon)) == set(oracle)
        if ok and args.splitting:
            seq = prefix_sequence(c.universe)
            ok = all(set(theorem1_solutions(c.program, U, c.init, c.universe)) == set(oracle) for U in seq)
            ok = ok and set(theorem2_solutions(c.program, seq, c.init, c.universe)) == set(oracle)
        if not ok:
            failures.append(c)
    elapsed = time.perf_counter() - start

    print(f"programs: {len(corpus)}")
    print("answer-set counts: " + ", ".join(f"{k}x{v}" for k, v in sorted(sizes.items())))
    print(f"failures: {len(failures)}")
    print(f"time: {elapsed:.1f}s")
    if args.show_failures:
        for c in failures:
            print(f"-- seed {c.seed}, horizon {c.horizon}")
            print(serialize_program(c.program), end="")


if __name__ == "__main__":
    main()
