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

#include "qme/weights.hpp"

#include <algorithm>
#include <numeric>

#include "qme/errors.hpp"

namespace qme {

std::vector<double> roc_weights(int n) {
    if (n < 1) {
        throw DataError("roc_weights: need at least one child");
    }
    std::vector<double> weights(static_cast<size_t>(n));
    // Accumulate the tail sum 1/n + 1/(n-1) + ... once, back to front.
    double tail = 0.0;
    for (int i = n; i >= 1; --i) {
        tail += 1.0 / i;
        weights[static_cast<size_t>(i - 1)] = tail / n;
    }
    return weights;
}

std::vector<double> weights_from_ranking(const std::vector<int>& ranks) {
    if (ranks.empty()) {
        throw DataError("weights_from_ranking: empty ranking");
    }
    for (int r : ranks) {
        if (r < 1) {
            throw DataError("weights_from_ranking: ranks must be positive integers");
        }
    }

    const size_t n = ranks.size();
    const std::vector<double> centroid = roc_weights(static_cast<int>(n));

    // Children sorted by rank occupy positions 0..n-1; a tie group spanning
    // positions [p, p+t) shares the mean of centroid[p..p+t).
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&ranks](size_t a, size_t b) { return ranks[a] < ranks[b]; });

    std::vector<double> weights(n, 0.0);
    size_t pos = 0;
    while (pos < n) {
        size_t end = pos + 1;
        while (end < n && ranks[order[end]] == ranks[order[pos]]) {
            ++end;
        }
        double mean = 0.0;
        for (size_t p = pos; p < end; ++p) {
            mean += centroid[p];
        }
        mean /= static_cast<double>(end - pos);
        for (size_t p = pos; p < end; ++p) {
            weights[order[p]] = mean;
        }
        pos = end;
    }
    return weights;
}

std::vector<double> resolve_weights(const WeightSpec& spec, size_t n) {
    if (spec.mode == WeightMode::Explicit) {
        if (spec.explicit_weights.size() != n) {
            throw DataError("weight spec lists " +
                            std::to_string(spec.explicit_weights.size()) +
                            " weights for " + std::to_string(n) + " children");
        }
        return spec.explicit_weights;
    }
    if (spec.ranks.size() != n) {
        throw DataError("weight spec lists " + std::to_string(spec.ranks.size()) +
                        " ranks for " + std::to_string(n) + " children");
    }
    return weights_from_ranking(spec.ranks);
}

}  // namespace qme
