from __future__ import annotations

import pytest

from nrbeamsim.codebook import Architecture, ArrayConfig
from nrbeamsim.frame import CsiRsConfig, SsBurstConfig, make_numerology
from nrbeamsim.procedures import DeploymentMode, Scenario


def make_scenario(
    m_gnb: int = 64,
    m_ue: int = 1,
    arch_gnb: str = "analog",
    arch_ue: str = "analog",
    k_bf_gnb: int | None = None,
    k_bf_ue: int | None = None,
    n: int = 3,
    n_ss: int = 64,
    t_ss_ms: float = 20.0,
    mode: str = "SA",
    lte_latency_ms: float | None = None,
    **kwargs,
) -> Scenario:
    """Terse scenario builder shared across test modules."""
    return Scenario(
        gnb=ArrayConfig(elements=m_gnb, arch=Architecture(arch_gnb), k_bf=k_bf_gnb),
        ue=ArrayConfig(elements=m_ue, arch=Architecture(arch_ue), k_bf=k_bf_ue),
        numerology=make_numerology(n),
        ss=SsBurstConfig(n_ss=n_ss, t_ss_ms=t_ss_ms),
        csi=kwargs.pop("csi", CsiRsConfig()),
        mode=DeploymentMode(mode),
        lte_latency_ms=lte_latency_ms,
        **kwargs,
    )


@pytest.fixture
def scenario_factory():
    return make_scenario
