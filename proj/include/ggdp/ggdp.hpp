//
// Copyright 2026 The ggdp Authors
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
//

#ifndef GGDP_GGDP_HPP_
#define GGDP_GGDP_HPP_

#include "ggdp/analysis.hpp"
#include "ggdp/calibration.hpp"
#include "ggdp/composed.hpp"
#include "ggdp/distributions.hpp"
#include "ggdp/mechanisms.hpp"
#include "ggdp/numeric.hpp"
#include "ggdp/quadrature.hpp"
#include "ggdp/random.hpp"
#include "ggdp/sparse_vector.hpp"
#include "ggdp/special_functions.hpp"
#include "ggdp/verify.hpp"

#endif  // GGDP_GGDP_HPP_
