#!/usr/bin/env python3
"""Generate conformance tests against the woven route-planning server.

Runs the two shipped purpose files: the direct authorized-access objective
and the two-step premium-class sequence.  Both finish without any random
jump, so the output is stable across runs.
"""

from secweave import corpus, formats, generation, weaving, xacml


def main() -> None:
    model = formats.parse_model(corpus.load_text("drp_initial.mdl"))
    policy = xacml.parse_policy(corpus.load_text("drp_policy.xml"))
    config = formats.parse_weave_config(corpus.load_text("drp.weave"), model)
    woven, _ = weaving.weave(model, policy, config)

    for name in ("drp_rule1.purposes", "drp_rule3.purposes"):
        purposes = formats.parse_purposes(corpus.load_text(name), woven)
        result = generation.generate_with_report(
            woven, purposes, generation.GenParams(rng_seed=0))
        print(f"== {name}: {len(result.testcase.steps)} steps, "
              f"{result.report.jumps} jumps, "
              f"{len(result.report.hits)}/{len(purposes)} objectives hit")
        print(formats.emit_testcase(result.testcase), end="")
        print()


if __name__ == "__main__":
    main()
