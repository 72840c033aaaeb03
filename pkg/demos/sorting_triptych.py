"""One mistake, four semantics.

The client asks for the median of a list of strings using a numeric
comparison.  Erased only notices when ``<`` is applied, Shallow notices at
the first typed function entry, Shallow with blame says which boundaries the
string came through, and Deep stops the list at the median boundary.
"""
from gtl import fixtures
from gtl.pipeline import evaluate


def show(config, mode):
    out = evaluate(fixtures.read("fig1"), config, mode)
    print(f"[{config} {mode}]")
    print(f"  {type(out.error).__name__}: {out.error}")
    blame = getattr(out.error, "blame", None)
    if blame is not None:
        for line in blame.lines():
            print(f"    {line}")
    c = out.counters
    print(f"  shape_checks={c.shape_checks} flat_checks={c.flat_checks} "
          f"blame_ops={c.blame_ops} steps={c.steps}")


def main():
    print(fixtures.read("fig1"))
    for mode in ("erased", "shallow", "sb", "deep"):
        show("111", mode)
    print("With an untyped comparison, Shallow has no check to fail:")
    show("110", "shallow")


if __name__ == "__main__":
    main()
