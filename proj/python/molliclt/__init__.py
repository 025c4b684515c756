"""Mollified central values of Dirichlet L-functions."""

from ._core import (
    CentralValueSet,
    CharacterTable,
    MollifierParams,
    build_table,
    clt_experiment,
    dirichlet_mollifier,
    e_trunc,
    fnv1a64,
    gauss_sums,
    l_values,
    m_alpha_beta,
    params_desk,
    params_paper,
    v_cutoff,
)

__all__ = [
    "CentralValueSet",
    "CharacterTable",
    "MollifierParams",
    "build_table",
    "clt_experiment",
    "dirichlet_mollifier",
    "e_trunc",
    "fnv1a64",
    "gauss_sums",
    "l_values",
    "m_alpha_beta",
    "params_desk",
    "params_paper",
    "v_cutoff",
]
