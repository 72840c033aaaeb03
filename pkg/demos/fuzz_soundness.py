"""What each semantics promises about a result, checked on random programs.

Random three-module programs import possibly mistyped untyped values.  Any
run that finishes must return a value with the right outline under Shallow,
and the right full first-order structure under Deep.  Erased promises
nothing, and the same probe finds violations there.
"""
import sys
from collections import Counter

from gtl.fuzz import conforms, first_order, generate, type_src
from gtl.pipeline import evaluate, weak_soundness_probe
from gtl.types.tsyntax import type_from_string


def main(count):
    print("A sample program:")
    print(generate(0).source)
    tally = Counter()
    for seed in range(count):
        prog = generate(seed)
        main_t = type_from_string(type_src(prog.main_type))
        for config in ("0", "1"):
            for mode in ("erased", "shallow", "sb", "deep"):
                out = evaluate(prog.source, config, mode)
                if not out.ok:
                    tally[mode, "error"] += 1
                    continue
                tally[mode, "finished"] += 1
                if mode == "deep":
                    ok = not first_order(prog.main_type) or conforms(prog.main_type, out.value)
                else:
                    ok = weak_soundness_probe(main_t, out.value)
                if not ok:
                    tally[mode, "violation"] += 1
    for mode in ("erased", "shallow", "sb", "deep"):
        print(f"{mode:8} finished={tally[mode, 'finished']:4} errors={tally[mode, 'error']:4} "
              f"violations={tally[mode, 'violation']}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 200)
