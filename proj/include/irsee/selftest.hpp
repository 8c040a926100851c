// SPDX-License-Identifier: Apache-2.0
//
// irsee: energy-efficient beamforming for IRS-assisted short-packet downlinks
// Copyright (C) 2026 The irsee authors
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

#ifndef IRSEE_SELFTEST_HPP
#define IRSEE_SELFTEST_HPP

#include <iosfwd>

namespace irsee
{
    // Golden values and invariant checks over a few seeded drops. Prints one
    // PASS/FAIL line per check (deterministic text) and returns the failure count.
    int run_selftest(std::ostream &os);

} // namespace irsee

#endif
