# Copyright 2026 The embshift Authors
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

"""Audio embedding robustness toolkit.

Measures how much an embedding space moves when the underlying audio is
degraded by channel effects (filtering, gain with hard clipping, reverb).
The heavy lifting lives in the `_core` extension; this package re-exports
its operations.
"""

from embshift._core import (
    __version__,
    cophenetic,
    cpcd,
    detect_inflection,
    embed_clip_peak,
    embed_frames,
    fad,
    frame_spl,
    mean_cosine_distance,
    minmax_scale,
    perturb,
    run,
    silhouette,
)

__all__ = [
    "__version__",
    "cophenetic",
    "cpcd",
    "detect_inflection",
    "embed_clip_peak",
    "embed_frames",
    "fad",
    "frame_spl",
    "mean_cosine_distance",
    "minmax_scale",
    "perturb",
    "run",
    "silhouette",
]
