"""A typed signature that untyped callers can walk straight past.

``make-bear`` is typed to return bears, but it is the mistyped untyped
function itself.  Shallow's check at the import only confirms that it is a
one-argument procedure, so untyped code mapping over it gets rabbits back.
Deep wraps the import and catches the first rabbit.
"""
from gtl import fixtures
from gtl.pipeline import evaluate


def main():
    src = fixtures.read("bear")
    print(src)
    for mode in ("erased", "shallow", "sb", "deep"):
        out = evaluate(src, "typed", mode)
        result = out.rendered if out.ok else f"{type(out.error).__name__}: {out.error}"
        print(f"{mode:8} {result}")


if __name__ == "__main__":
    main()
