"""Shared helpers for the demo scripts (output folder)."""

import os

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "out")


def save(name, text):
    os.makedirs(OUT, exist_ok=True)
    path = os.path.join(OUT, name)
    with open(path, "w") as fh:
        fh.write(text)
    print(f"wrote {path}")
