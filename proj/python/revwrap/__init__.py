# Copyright 2026 The revwrap Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python face of the revwrap core. Dicts in, dicts out."""

import json

from . import _revwrap
from ._revwrap import RevwrapError

__all__ = [
    "RevwrapError",
    "analyze",
    "classify",
    "compare",
    "extract",
    "induce",
    "normalize",
    "recheck",
    "render",
    "tokenize",
]


def _cfg(config):
    if config is None:
        return ""
    return config if isinstance(config, str) else json.dumps(config)


def _enc(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def tokenize(source, config=None):
    return json.loads(_revwrap.tokenize(source, _cfg(config)))


def normalize(text):
    return _revwrap.normalize(text)


def classify(name, config=None):
    return _revwrap.classify(name, _cfg(config))


def render(source, config=None):
    return _revwrap.render(source, _cfg(config))


def analyze(source, roi_spec, config=None):
    return json.loads(_revwrap.analyze(source, _enc(roi_spec), _cfg(config)))


def induce(source, roi_spec, source_ref="inline", config=None):
    return json.loads(_revwrap.induce(source, _enc(roi_spec), source_ref, _cfg(config)))


def extract(template, source, source_ref="inline", config=None):
    return json.loads(_revwrap.extract(_enc(template), source, source_ref, _cfg(config)))


def compare(old_signature, new_signature):
    return json.loads(_revwrap.compare(_enc(old_signature), _enc(new_signature)))


def recheck(template, source, config=None):
    return json.loads(_revwrap.recheck(_enc(template), source, _cfg(config)))
