// Copyright 2026 The dpaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Convenience header that pulls in the whole library.

#ifndef DPAUDIT_DPAUDIT_HPP_
#define DPAUDIT_DPAUDIT_HPP_

#include "dpaudit/canary.hpp"
#include "dpaudit/confidence.hpp"
#include "dpaudit/discrete.hpp"
#include "dpaudit/error.hpp"
#include "dpaudit/estimators.hpp"
#include "dpaudit/histogram.hpp"
#include "dpaudit/io.hpp"
#include "dpaudit/mechanisms.hpp"
#include "dpaudit/numeric.hpp"
#include "dpaudit/pld.hpp"
#include "dpaudit/profile.hpp"
#include "dpaudit/random.hpp"
#include "dpaudit/tradeoff.hpp"

#endif  // DPAUDIT_DPAUDIT_HPP_
