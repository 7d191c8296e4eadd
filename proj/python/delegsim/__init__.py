# delegsim: EIP-7702 delegation simulator
# Copyright 2026 The delegsim Authors.
# SPDX-License-Identifier: Apache-2.0

"""EIP-7702 delegation simulator.

Results are plain dicts mirroring the JSON written by the ``delegsim`` tool.
Wei and token amounts are decimal strings.
"""

from ._core import (
    benign_workflow,
    craft_tuple,
    decode_tuple,
    initial_state,
    keccak256,
    policy,
    presets,
    run_crosschain,
    run_pipeline,
    run_scenario,
    scan_state,
)

__all__ = [
    "benign_workflow",
    "craft_tuple",
    "decode_tuple",
    "initial_state",
    "keccak256",
    "policy",
    "presets",
    "run_crosschain",
    "run_pipeline",
    "run_scenario",
    "scan_state",
]
