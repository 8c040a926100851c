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

// Command-line front end: run, sweep, selftest

#include "irsee/config.hpp"
#include "irsee/experiments.hpp"
#include "irsee/selftest.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace
{
    constexpr int kOk = 0, kUsage = 1, kIo = 2, kSelftestFailed = 3;

    struct IoError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    irsee::RunConfig read_config(const std::string &path)
    {
        try
        {
            return irsee::load_config(path);
        }
        catch (const std::invalid_argument &)
        {
            throw;
        }
        catch (const std::runtime_error &e)
        {
            throw IoError(e.what());
        }
    }

    void emit(const std::string &path, const std::string &text)
    {
        if (path.empty())
        {
            std::cout << text << std::flush;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out || !(out << text) || !out.flush())
            throw IoError("cannot write '" + path + "'");
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Energy-efficient beamforming and surface design for short-packet downlinks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", irsee::kArtifactVersion);

    std::string config, out, scheme_name;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;

    CLI::App *run = app.add_subcommand("run", "Solve one drop and print a summary");
    run->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "Channel seed");
    run->add_option("--out", out, "Write the summary here instead of stdout");
    run->add_option("--scheme", scheme_name, "proposed, fixed-irs or no-irs")->default_val("proposed");

    CLI::App *sweep = app.add_subcommand("sweep", "Monte-Carlo sweep described by the config file, CSV output");
    sweep->add_option("--config", config, "JSON config file with a sweep section")->required()->check(CLI::ExistingFile);
    sweep->add_option("--seed", seed, "Base seed, drop d uses base + d");
    sweep->add_option("--out", out, "CSV path (overrides the config)");
    sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--scheme", scheme_name, "Run only this scheme");

    app.add_subcommand("selftest", "Golden values and invariant checks");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try
    {
        if (app.got_subcommand("selftest"))
            return irsee::run_selftest(std::cout) ? kSelftestFailed : kOk;

        irsee::RunConfig rc;
        if (!config.empty())
            rc = read_config(config);

        if (app.got_subcommand("run"))
        {
            if (run->count("--seed"))
                rc.scenario.seed = seed;
            const irsee::Scheme scheme = irsee::scheme_from_string(scheme_name);
            const irsee::ChannelSet c = irsee::generate_channels(rc.scenario);
            const irsee::AOResult r = irsee::run_scheme(scheme, c, rc.scenario, rc.ao);
            std::ostringstream os;
            irsee::write_summary(os, rc.scenario, r);
            emit(out, os.str());
            return kOk;
        }

        if (!rc.sweep)
        {
            std::cerr << "config '" << config << "' has no sweep section\n" << sweep->help();
            return kUsage;
        }
        irsee::SweepSpec spec = *rc.sweep;
        if (sweep->count("--seed"))
            spec.base.seed = seed;
        if (sweep->count("--jobs"))
            spec.jobs = jobs;
        if (sweep->count("--out"))
            spec.output = out;
        if (sweep->count("--scheme"))
            spec.schemes = {irsee::scheme_from_string(scheme_name)};
        spec.validate();
        if (!spec.output.empty())
        {
            // fail on an unwritable path before spending time on the drops
            std::ofstream probe(spec.output, std::ios::app);
            if (!probe)
                throw IoError("cannot write '" + spec.output + "'");
        }
        const irsee::SweepResult res = irsee::run_sweep(spec);
        std::ostringstream os;
        irsee::write_csv(os, spec, res);
        emit(spec.output, os.str());
        return kOk;
    }
    catch (const IoError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    catch (const std::exception &e)
    {
        // solver or system failure outside the argument checks
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    }
}
