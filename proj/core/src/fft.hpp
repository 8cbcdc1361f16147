// SPDX-License-Identifier: Apache-2.0
//
// otfs-isac-lab: link-level NOMA-assisted OTFS-ISAC simulation
// Copyright (C) 2026 The otfs-isac-lab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Thin FFTW3 wrapper. Plans are created once per (length, sign) and reused;
// plan creation is serialized because the FFTW planner is not re-entrant.

#include "otfs_isac/common.hpp"

#include <cstddef>

namespace otfs_isac::detail {

enum class FftSign { forward, backward };

/// Unnormalized in-place DFT of `n` contiguous samples.
/// forward:  X[f] = sum_t x[t] exp(-j2pi f t / n)
/// backward: x[t] = sum_f X[f] exp(+j2pi f t / n)
void fft_inplace(cplx* data, std::size_t n, FftSign sign);

} // namespace otfs_isac::detail
