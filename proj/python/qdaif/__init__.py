# Copyright 2026 The qdaif Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Quality-diversity search over language-model text, scored by AI feedback."""

import json as _json

from . import _qdaif
from ._qdaif import (
    ArgumentError,
    ConfigError,
    Error,
    ReplayError,
    RunConfig,
    RunLog,
    StructuralError,
    bin_index,
    bootstrap_ci,
    build_feedback_prompt,
    load_config,
    mann_whitney_u,
    methods,
    read_runlog,
    render_heatmap_svg,
    render_report,
    rouge_l,
    run,
    run_to_directory,
    to_uniform,
    tokenize,
)

__all__ = [
    "ArgumentError",
    "ConfigError",
    "Error",
    "ReplayError",
    "RunConfig",
    "RunLog",
    "StructuralError",
    "bin_index",
    "bootstrap_ci",
    "build_feedback_prompt",
    "config_dict",
    "config_schema",
    "load_config",
    "mann_whitney_u",
    "methods",
    "read_runlog",
    "render_heatmap_svg",
    "render_report",
    "rouge_l",
    "run",
    "run_to_directory",
    "to_uniform",
    "tokenize",
]


def config_schema():
    """JSON Schema of the config document, as a dict."""
    return _json.loads(_qdaif.config_schema())


def config_dict(config):
    """Fully resolved config document of `config`, as a dict."""
    return _json.loads(config.to_json())
