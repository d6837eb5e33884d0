# Copyright 2026 The querysim Authors
# SPDX-License-Identifier: Apache-2.0

"""Conditional simulation by rejection, with exact enumeration oracles."""

from ._core import *  # noqa: F401,F403
from ._core import Error, __doc__  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
