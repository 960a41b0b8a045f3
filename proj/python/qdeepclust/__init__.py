# Copyright 2026 The qdeepclust Authors
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

"""Python front end for the qdeepclust simulator core."""

import json

from . import _qdc
from ._qdc import (
    Error,
    adiabatic_distribution,
    cli,
    generate_blobs,
    nmi,
    norm_audit,
    purity,
    quantum_distance,
    reset_norm_audit,
)

__all__ = [
    "Error",
    "MulticlassSVM",
    "adiabatic_distribution",
    "cli",
    "cost_report",
    "generate_blobs",
    "lloyd",
    "nmi",
    "norm_audit",
    "purity",
    "qkmeans",
    "quantum_distance",
    "reset_norm_audit",
    "run_pipeline",
]

class MulticlassSVM:
    """All-pair quantum SVM; `kernel` is a dict such as {"kind": "rbf", "gamma": 0.5}."""

    def __init__(self, x, labels, g, kernel=None, eta=10.0, eps_k=None):
        self._model = _qdc.MulticlassSVM(
            x, list(labels), g, json.dumps(kernel or {"kind": "linear"}), eta, eps_k
        )

    @property
    def g(self):
        return self._model.g

    def predict(self, x, shots=0, seed=0, oracle=False):
        return self._model.predict(x, shots, seed, oracle)

    def to_dict(self):
        return json.loads(self._model.to_json())

def qkmeans(x, k, seeds, iters=20, shots=0, seed=0):
    return json.loads(_qdc.qkmeans(x, k, list(seeds), iters, shots, seed))

def lloyd(x, k, seeds, iters=20):
    return json.loads(_qdc.lloyd(x, k, list(seeds), iters))

def run_pipeline(config, x, labels=None):
    """Runs the deep clustering loop; `config` uses the deep-cluster "pipeline" keys."""
    labels = None if labels is None else list(labels)
    return json.loads(_qdc.run_pipeline(json.dumps(config or {}), x, labels))

def cost_report(params=None):
    return json.loads(_qdc.cost_report(json.dumps(params or {})))
