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

#ifndef IRSEE_CONFIG_HPP
#define IRSEE_CONFIG_HPP

#include "irsee/experiments.hpp"

#include <optional>
#include <string>

namespace irsee
{
    // Contents of a JSON config file. Sections: "scenario" (with nested "geometry", "powers"
    // and "qos"), "ao", "beamform", "phase", "sweep". Missing keys keep their defaults,
    // unknown keys are rejected.
    struct RunConfig
    {
        Scenario scenario = Scenario::defaults();
        AOConfig ao;
        std::optional<SweepSpec> sweep; // present when the file has a "sweep" section
    };

    // Throws std::invalid_argument on malformed content
    RunConfig parse_config(const std::string &text);

    // Throws std::runtime_error when the file cannot be read, std::invalid_argument on malformed content
    RunConfig load_config(const std::string &path);

    // Canonical JSON text of a sweep (output path and worker count omitted), stable key order
    std::string canonical_json(const SweepSpec &spec);

} // namespace irsee

#endif
