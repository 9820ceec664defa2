#!/usr/bin/env python3
"""Weave the access policy into the route-planning server and show the result.

Prints the weave report first, then the strengthened model source.
"""

from secweave import corpus, formats, weaving, xacml


def main() -> None:
    model = formats.parse_model(corpus.load_text("drp_initial.mdl"))
    policy = xacml.parse_policy(corpus.load_text("drp_policy.xml"))
    config = formats.parse_weave_config(corpus.load_text("drp.weave"), model)

    woven, report = weaving.weave(model, policy, config)

    print(report.render(woven))
    print()
    print(formats.serialize_model(woven), end="")


if __name__ == "__main__":
    main()
