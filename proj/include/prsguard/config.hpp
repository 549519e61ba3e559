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

// Largest register the simulator accepts. Override at compile time with
// -DPRSGUARD_MAX_QUBITS=<n>; a dense state costs 16 * 2^n bytes.
#ifndef PRSGUARD_MAX_QUBITS
#define PRSGUARD_MAX_QUBITS 14
#endif

namespace prsguard {

inline constexpr int kMaxQubits = PRSGUARD_MAX_QUBITS;
inline constexpr const char* kVersion = "0.3.0";

static_assert(kMaxQubits >= 1 && kMaxQubits <= 30, "unsupported PRSGUARD_MAX_QUBITS");

}  // namespace prsguard
