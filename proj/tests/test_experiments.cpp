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
#include "irsee/config.hpp"
#include "irsee/experiments.hpp"

#include "doctest.h"

#include <cmath>
#include <map>
#include <sstream>
#include <string>

using namespace irsee;

namespace
{
    SweepSpec small_sweep()
    {
        SweepSpec sp;
        sp.base = Scenario::defaults(4);
        sp.base.seed = 30;
        sp.axis = SweepAxis::epsilon;
        sp.grid = {1e-7, 1e-5};
        sp.drops = 3;
        sp.schemes = {Scheme::fixed_irs, Scheme::no_irs};
        return sp;
    }

    std::string csv_text(const SweepSpec &sp, const SweepResult &r)
    {
        std::ostringstream os;
        write_csv(os, sp, r);
        return os.str();
    }

    std::vector<std::string> split(const std::string &line)
    {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ','))
            out.push_back(f);
        return out;
    }
} // namespace

TEST_CASE("axis names round-trip")
{
    for (SweepAxis a : {SweepAxis::epsilon, SweepAxis::blocklength, SweepAxis::irs_elements})
        CHECK(axis_from_string(to_string(a)) == a);
    CHECK_THROWS_AS(axis_from_string("snr"), std::invalid_argument);
}

TEST_CASE("sweep validation")
{
    SweepSpec sp = small_sweep();
    CHECK_NOTHROW(sp.validate());
    sp.grid = {};
    CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
    sp.grid = {1e-5, 1e-7};
    CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
    sp = small_sweep();
    sp.drops = 0;
    CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
    sp = small_sweep();
    sp.schemes.clear();
    CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
    sp = small_sweep();
    sp.axis = SweepAxis::irs_elements;
    sp.grid = {4.5};
    CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
}

TEST_CASE("grid points share the drop seeds")
{
    const SweepSpec sp = small_sweep();
    const Scenario a = sp.scenario(1e-7, 2), b = sp.scenario(1e-5, 2);
    CHECK(a.seed == 32);
    CHECK(b.seed == 32);
    CHECK(a.eps == std::vector<double>(4, 1e-7));
    CHECK(b.eps == std::vector<double>(4, 1e-5));
    const ChannelSet ca = generate_channels(a), cb = generate_channels(b);
    CHECK(ca.H == cb.H);
    CHECK(ca.h_bs == cb.h_bs);

    SweepSpec m = sp;
    m.axis = SweepAxis::blocklength;
    CHECK(m.scenario(1000.0, 0).blocklength == 1000.0);
    m.axis = SweepAxis::irs_elements;
    CHECK(m.scenario(30.0, 0).N == 30);
}

TEST_CASE("single point, drop and scheme gives one row and one aggregate")
{
    SweepSpec sp = small_sweep();
    sp.grid = {1e-7};
    sp.drops = 1;
    sp.schemes = {Scheme::no_irs};
    const SweepResult r = run_sweep(sp);
    REQUIRE(r.rows.size() == 1);
    REQUIRE(r.aggregates.size() == 1);
    CHECK(r.aggregates[0].count == 1);
    CHECK(r.aggregates[0].ee_mean == r.rows[0].ee);
    CHECK(r.aggregates[0].ee_std == 0.0);

    // metadata, header, one data row, mean and std lines
    std::istringstream is(csv_text(sp, r));
    std::vector<std::string> lines;
    for (std::string l; std::getline(is, l);)
        lines.push_back(l);
    std::size_t meta = 0;
    while (meta < lines.size() && lines[meta][0] == '#')
        ++meta;
    REQUIRE(lines.size() == meta + 4);
    CHECK(lines[meta] == "seed,N,m_d,epsilon,scheme,ee,sum_rate,power,outer_iters,min_rank_ratio,status");
    CHECK(split(lines[meta + 1]).size() == 11);
    CHECK(split(lines[meta + 2])[0] == "mean");
    CHECK(split(lines[meta + 3])[0] == "std");
}

TEST_CASE("aggregates recompute from the written rows; worker count does not change the output")
{
    SweepSpec sp = small_sweep();
    const SweepResult serial = run_sweep(sp);
    CHECK(serial.rows.size() == sp.grid.size() * sp.drops * sp.schemes.size());
    sp.jobs = 3;
    const SweepResult parallel = run_sweep(sp);
    const std::string text = csv_text(sp, serial);
    CHECK(text == csv_text(sp, parallel));

    // rows are in (grid value, seed, scheme) order
    for (std::size_t i = 1; i < serial.rows.size(); ++i)
    {
        const SweepRow &a = serial.rows[i - 1], &b = serial.rows[i];
        const bool ordered = a.grid_value < b.grid_value ||
                             (a.grid_value == b.grid_value &&
                              (a.seed < b.seed || (a.seed == b.seed && int(a.scheme) < int(b.scheme))));
        CHECK(ordered);
    }

    // parse the CSV back and recompute mean and sample std of ee per (epsilon, scheme)
    std::map<std::pair<std::string, std::string>, std::vector<double>> ee;
    std::map<std::pair<std::string, std::string>, std::pair<double, double>> written;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);)
    {
        if (l.empty() || l[0] == '#' || l.rfind("seed,", 0) == 0)
            continue;
        const auto f = split(l);
        REQUIRE(f.size() == 11);
        const auto key = std::make_pair(f[3], f[4]);
        if (f[0] == "mean")
            written[key].first = std::stod(f[5]);
        else if (f[0] == "std")
            written[key].second = std::stod(f[5]);
        else if (f[10] == "converged" || f[10] == "iteration_cap" || f[10] == "stalled")
            ee[key].push_back(std::stod(f[5]));
    }
    CHECK(written.size() == sp.grid.size() * sp.schemes.size());
    for (const auto &[key, v] : ee)
    {
        double mean = 0.0;
        for (double x : v)
            mean += x;
        mean /= double(v.size());
        double ss = 0.0;
        for (double x : v)
            ss += (x - mean) * (x - mean);
        const double sd = v.size() > 1 ? std::sqrt(ss / double(v.size() - 1)) : 0.0;
        CHECK(std::abs(written[key].first - mean) <= 1e-9);
        CHECK(std::abs(written[key].second - sd) <= 1e-9);
    }
}

TEST_CASE("config hash ignores output and workers")
{
    SweepSpec a = small_sweep(), b = small_sweep();
    b.output = "elsewhere.csv";
    b.jobs = 4;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.grid = {1e-7};
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("config parsing")
{
    SUBCASE("empty object keeps the defaults")
    {
        const RunConfig rc = parse_config("{}");
        const Scenario d = Scenario::defaults();
        CHECK(rc.scenario.N == d.N);
        CHECK(rc.scenario.eps == d.eps);
        CHECK(rc.scenario.sigma2 == d.sigma2);
        CHECK(rc.scenario.deadline == d.deadline);
        CHECK(!rc.sweep);
    }
    SUBCASE("scalars broadcast to every user, lists are per user")
    {
        const RunConfig rc = parse_config(R"({"scenario": {"K": 3, "qos": {"eps": 1e-5, "r_min": [1, 2, 3]},
            "powers": {"sigma2": 2e-13}, "geometry": {"user_pos": [[1, 2], [3, 4], [5, 6]]}}})");
        CHECK(rc.scenario.K == 3);
        CHECK(rc.scenario.eps == std::vector<double>(3, 1e-5));
        CHECK(rc.scenario.r_min == std::vector<double>{1, 2, 3});
        CHECK(rc.scenario.sigma2 == std::vector<double>(3, 2e-13));
        CHECK(rc.scenario.deadline == std::vector<std::size_t>(3, 3));
        CHECK(rc.scenario.user_pos[2] == Position{5, 6});
    }
    SUBCASE("solver sections and sweep")
    {
        const RunConfig rc = parse_config(R"({"ao": {"max_outer": 4}, "beamform": {"nu": 2.5, "solver": {"tol": 1e-7}},
            "phase": {"max_iter": 9}, "sweep": {"axis": "blocklength", "grid": [100, 250], "drops": 7,
            "schemes": ["no-irs"], "output": "x.csv", "jobs": 2}})");
        CHECK(rc.ao.max_outer == 4);
        CHECK(rc.ao.beamform.nu == 2.5);
        CHECK(rc.ao.beamform.solver.tol == 1e-7);
        CHECK(rc.ao.phase.max_iter == 9);
        REQUIRE(rc.sweep);
        CHECK(rc.sweep->axis == SweepAxis::blocklength);
        CHECK(rc.sweep->grid == std::vector<double>{100, 250});
        CHECK(rc.sweep->drops == 7);
        CHECK(rc.sweep->schemes == std::vector<Scheme>{Scheme::no_irs});
        CHECK(rc.sweep->output == "x.csv");
        CHECK(rc.sweep->jobs == 2);
        CHECK(rc.sweep->ao.max_outer == 4);
    }
    SUBCASE("malformed content is rejected")
    {
        CHECK_THROWS_AS(parse_config("{"), std::invalid_argument);
        CHECK_THROWS_AS(parse_config(R"({"scenari": {}})"), std::invalid_argument);
        CHECK_THROWS_AS(parse_config(R"({"scenario": {"qos": {"eps": [1e-5, 1e-5]}}})"), std::invalid_argument);
        CHECK_THROWS_AS(parse_config(R"({"scenario": {"N": "twenty"}})"), std::invalid_argument);
        CHECK_THROWS_AS(parse_config(R"({"sweep": {"grid": []}})"), std::invalid_argument);
        CHECK_THROWS_AS(parse_config(R"({"sweep": {"axis": "snr", "grid": [1]}})"), std::invalid_argument);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), std::runtime_error);
}

TEST_CASE("bundled default config loads")
{
    const RunConfig rc = load_config(IRSEE_SOURCE_DIR "/configs/default.json");
    REQUIRE(rc.sweep);
    CHECK(rc.sweep->grid.size() == 5);
    const Scenario d = Scenario::defaults();
    CHECK(rc.scenario.sigma2 == d.sigma2);
    CHECK(rc.scenario.r_min == d.r_min);
}
