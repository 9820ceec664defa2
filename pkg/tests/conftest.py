import pytest

from secweave import corpus, formats, weaving, xacml


@pytest.fixture(scope="session")
def drp():
    return formats.parse_model(
        corpus.load_text("drp_initial.mdl"), file="drp_initial.mdl")


@pytest.fixture(scope="session")
def v2i():
    return formats.parse_model(corpus.load_text("v2i.mdl"), file="v2i.mdl")


@pytest.fixture(scope="session")
def drp_policy():
    return xacml.parse_policy(corpus.load_text("drp_policy.xml"))


@pytest.fixture(scope="session")
def drp_weave_cfg(drp):
    return formats.parse_weave_config(corpus.load_text("drp.weave"), drp)


@pytest.fixture(scope="session")
def drp_weave_result(drp, drp_policy, drp_weave_cfg):
    return weaving.weave(drp, drp_policy, drp_weave_cfg)


@pytest.fixture(scope="session")
def drp_woven(drp_weave_result):
    return drp_weave_result[0]


@pytest.fixture(scope="session")
def drp_report(drp_weave_result):
    return drp_weave_result[1]
