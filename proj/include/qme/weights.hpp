// Copyright 2026 The qme Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QME_WEIGHTS_HPP
#define QME_WEIGHTS_HPP

#include <vector>

#include "qme/model.hpp"

namespace qme {

/// Rank-order centroid weights for n children ordered most- to
/// least-important: w_i = (1/n) * sum_{k=i..n} 1/k. Sums to 1.
std::vector<double> roc_weights(int n);

/// Converts an importance ranking (1 = most important, ties allowed, only
/// the order matters) into centroid weights. Tied children share the
/// arithmetic mean of the centroid weights of the positions they occupy.
/// Throws DataError on an empty ranking or non-positive ranks.
std::vector<double> weights_from_ranking(const std::vector<int>& ranks);

/// Resolves a WeightSpec for `n` children: explicit weights verbatim,
/// ranked via weights_from_ranking. Throws DataError when the spec does not
/// fit n children (count mismatch, bad sum is left to validation).
std::vector<double> resolve_weights(const WeightSpec& spec, size_t n);

}  // namespace qme

#endif  // QME_WEIGHTS_HPP
