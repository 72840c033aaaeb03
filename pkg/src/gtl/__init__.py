"""A small gradually typed language with Deep and Shallow run-time checks.

Typical use::

    from gtl.pipeline import evaluate
    outcome = evaluate(source, config="110", mode="shallow")
"""

__version__ = "0.1.0"
