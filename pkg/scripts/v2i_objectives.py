#!/usr/bin/env python3
"""Derive one test objective per certificate value of the vehicle model.

Sweeps the certificate parameter of the response signal at the
wait_certificate state and prints the resulting purpose file.
"""

from secweave import corpus, formats, generation


def main() -> None:
    model = formats.parse_model(corpus.load_text("v2i.mdl"))
    purposes = generation.generate_objectives(
        model, "wait_certificate", "response", "certificate")
    for p in purposes:
        print(f"// {p.input.args[0]} leads to {p.destination}")
    print()
    print(formats.serialize_purposes(tuple(purposes)), end="")


if __name__ == "__main__":
    main()
