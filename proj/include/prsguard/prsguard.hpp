// Copyright 2026 The prsguard Authors
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

#pragma once

#include "prsguard/bits.hpp"
#include "prsguard/circuit.hpp"
#include "prsguard/config.hpp"
#include "prsguard/encodings.hpp"
#include "prsguard/genmodel.hpp"
#include "prsguard/metrics.hpp"
#include "prsguard/mia.hpp"
#include "prsguard/parallel.hpp"
#include "prsguard/prf.hpp"
#include "prsguard/prs.hpp"
#include "prsguard/quantum_state.hpp"
#include "prsguard/random.hpp"
