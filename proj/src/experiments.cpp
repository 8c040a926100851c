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

#include "irsee/experiments.hpp"

#include "irsee/config.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace irsee
{
    namespace
    {
        // Shortest text that reads back to the same double
        std::string num(double v)
        {
            char buf[64];
            const auto r = std::to_chars(buf, buf + sizeof buf, v);
            return std::string(buf, r.ptr);
        }

        int scheme_rank(Scheme s) { return static_cast<int>(s); }

        bool row_less(const SweepRow &a, const SweepRow &b)
        {
            if (a.grid_value != b.grid_value)
                return a.grid_value < b.grid_value;
            if (a.seed != b.seed)
                return a.seed < b.seed;
            return scheme_rank(a.scheme) < scheme_rank(b.scheme);
        }

        void mean_std(const std::vector<double> &v, double &mean, double &sd)
        {
            mean = 0.0;
            for (double x : v)
                mean += x;
            mean /= static_cast<double>(v.size());
            double ss = 0.0;
            for (double x : v)
                ss += (x - mean) * (x - mean);
            sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
        }

        std::vector<SweepRow> run_drop(const SweepSpec &spec, double value, std::size_t drop)
        {
            const Scenario s = spec.scenario(value, drop);
            const ChannelSet c = generate_channels(s);
            std::vector<SweepRow> rows;
            for (Scheme scheme : spec.schemes)
            {
                try
                {
                    rows.push_back(make_row(value, s, scheme, run_scheme(scheme, c, s, spec.ao)));
                }
                catch (const std::exception &)
                {
                    SweepRow r = make_row(value, s, scheme, AOResult{});
                    r.status = RunStatus::solver_failure;
                    rows.push_back(r);
                }
            }
            return rows;
        }
    } // namespace

    const char *to_string(SweepAxis a)
    {
        switch (a)
        {
        case SweepAxis::epsilon:
            return "epsilon";
        case SweepAxis::blocklength:
            return "blocklength";
        case SweepAxis::irs_elements:
            return "irs_elements";
        }
        return "unknown";
    }

    SweepAxis axis_from_string(const std::string &name)
    {
        for (SweepAxis a : {SweepAxis::epsilon, SweepAxis::blocklength, SweepAxis::irs_elements})
            if (name == to_string(a))
                return a;
        throw std::invalid_argument("unknown sweep axis '" + name + "'");
    }

    void SweepSpec::validate() const
    {
        if (grid.empty())
            throw std::invalid_argument("SweepSpec: empty grid");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1]))
                throw std::invalid_argument("SweepSpec: grid must be strictly increasing");
        if (drops < 1)
            throw std::invalid_argument("SweepSpec: drops must be >= 1");
        if (schemes.empty())
            throw std::invalid_argument("SweepSpec: no schemes");
        if (jobs < 1)
            throw std::invalid_argument("SweepSpec: jobs must be >= 1");
        if (axis == SweepAxis::irs_elements)
            for (double v : grid)
                if (!(v >= 0.0) || v != std::floor(v))
                    throw std::invalid_argument("SweepSpec: surface sizes must be non-negative integers");
        for (double v : grid)
            scenario(v, 0).validate();
    }

    Scenario SweepSpec::scenario(double grid_value, std::size_t drop) const
    {
        Scenario s = base;
        s.seed = base.seed + drop;
        switch (axis)
        {
        case SweepAxis::epsilon:
            s.eps.assign(s.K, grid_value);
            break;
        case SweepAxis::blocklength:
            s.blocklength = grid_value;
            break;
        case SweepAxis::irs_elements:
            s.N = static_cast<std::size_t>(grid_value);
            break;
        }
        return s;
    }

    bool produced_design(RunStatus s)
    {
        return s == RunStatus::converged || s == RunStatus::iteration_cap || s == RunStatus::stalled;
    }

    SweepRow make_row(double grid_value, const Scenario &s, Scheme scheme, const AOResult &r)
    {
        SweepRow row;
        row.grid_value = grid_value;
        row.seed = s.seed;
        row.N = s.N;
        row.m_d = s.blocklength;
        row.epsilon = s.eps.empty() ? 0.0 : s.eps.front();
        row.scheme = scheme;
        row.ee = r.ee;
        row.sum_rate = r.sum_rate;
        row.power = r.power;
        row.outer_iters = r.outer_iters;
        row.min_rank_ratio = r.min_rank_ratio;
        row.status = r.status;
        row.fallback = r.fallback;
        return row;
    }

    std::vector<SweepAggregate> aggregate(const std::vector<SweepRow> &rows)
    {
        std::map<std::pair<double, int>, std::vector<const SweepRow *>> groups;
        for (const auto &r : rows)
            if (produced_design(r.status))
                groups[{r.grid_value, scheme_rank(r.scheme)}].push_back(&r);
        std::vector<SweepAggregate> out;
        for (const auto &[key, g] : groups)
        {
            SweepAggregate a;
            a.grid_value = key.first;
            a.scheme = g.front()->scheme;
            a.count = g.size();
            std::vector<double> ee, sr, pw, it, rk;
            for (const SweepRow *r : g)
            {
                ee.push_back(r->ee);
                sr.push_back(r->sum_rate);
                pw.push_back(r->power);
                it.push_back(r->outer_iters);
                rk.push_back(r->min_rank_ratio);
            }
            mean_std(ee, a.ee_mean, a.ee_std);
            mean_std(sr, a.sum_rate_mean, a.sum_rate_std);
            mean_std(pw, a.power_mean, a.power_std);
            mean_std(it, a.outer_iters_mean, a.outer_iters_std);
            mean_std(rk, a.min_rank_mean, a.min_rank_std);
            out.push_back(a);
        }
        return out;
    }

    SweepResult run_sweep(const SweepSpec &spec)
    {
        spec.validate();
        const std::size_t tasks = spec.grid.size() * spec.drops;
        std::vector<std::vector<SweepRow>> slots(tasks);
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;

        const auto worker = [&] {
            for (std::size_t t = next++; t < tasks; t = next++)
            {
                try
                {
                    slots[t] = run_drop(spec, spec.grid[t / spec.drops], t % spec.drops);
                }
                catch (...)
                {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        };
        const std::size_t n = std::min(spec.jobs, tasks);
        if (n <= 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            for (std::size_t i = 0; i < n; ++i)
                pool.emplace_back(worker);
            for (auto &th : pool)
                th.join();
        }
        if (error)
            std::rethrow_exception(error);

        SweepResult res;
        for (auto &s : slots)
            res.rows.insert(res.rows.end(), s.begin(), s.end());
        std::sort(res.rows.begin(), res.rows.end(), row_less);
        res.aggregates = aggregate(res.rows);
        return res;
    }

    std::string config_hash(const SweepSpec &spec)
    {
        // FNV-1a, 64 bit
        std::uint64_t h = 14695981039346656037ull;
        for (unsigned char ch : canonical_json(spec))
        {
            h ^= ch;
            h *= 1099511628211ull;
        }
        static const char *digits = "0123456789abcdef";
        std::string out(16, '0');
        for (int i = 15; i >= 0; --i, h >>= 4)
            out[i] = digits[h & 0xf];
        return out;
    }

    void write_csv(std::ostream &os, const SweepSpec &spec, const SweepResult &result)
    {
        os << "# irsee sweep\n";
        os << "# version: " << kArtifactVersion << "\n";
        os << "# config_hash: " << config_hash(spec) << "\n";
        os << "# axis: " << to_string(spec.axis) << "\n";
        os << "# drops: " << spec.drops << "\n";
        os << "seed,N,m_d,epsilon,scheme,ee,sum_rate,power,outer_iters,min_rank_ratio,status\n";
        for (const auto &r : result.rows)
            os << r.seed << ',' << r.N << ',' << num(r.m_d) << ',' << num(r.epsilon) << ',' << to_string(r.scheme)
               << ',' << num(r.ee) << ',' << num(r.sum_rate) << ',' << num(r.power) << ',' << r.outer_iters << ','
               << num(r.min_rank_ratio) << ',' << to_string(r.status) << '\n';
        for (const auto &a : result.aggregates)
        {
            const Scenario s = spec.scenario(a.grid_value, 0);
            const std::string lead = ',' + std::to_string(s.N) + ',' + num(s.blocklength) + ',' + num(s.eps.front()) +
                                     ',' + to_string(a.scheme) + ',';
            const std::string tail = ",n=" + std::to_string(a.count) + '\n';
            os << "mean" << lead << num(a.ee_mean) << ',' << num(a.sum_rate_mean) << ',' << num(a.power_mean) << ','
               << num(a.outer_iters_mean) << ',' << num(a.min_rank_mean) << tail;
            os << "std" << lead << num(a.ee_std) << ',' << num(a.sum_rate_std) << ',' << num(a.power_std) << ','
               << num(a.outer_iters_std) << ',' << num(a.min_rank_std) << tail;
        }
    }

    void write_csv_file(const std::string &path, const SweepSpec &spec, const SweepResult &result)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write '" + path + "'");
        write_csv(out, spec, result);
        out.flush();
        if (!out)
            throw std::runtime_error("write to '" + path + "' failed");
    }

    void write_summary(std::ostream &os, const Scenario &s, const AOResult &r)
    {
        os << "scheme: " << to_string(r.scheme) << '\n';
        os << "seed: " << s.seed << '\n';
        os << "N: " << s.N << '\n';
        os << "m_d: " << num(s.blocklength) << '\n';
        os << "status: " << to_string(r.status) << '\n';
        os << "ee: " << num(r.ee) << '\n';
        os << "sum_rate: " << num(r.sum_rate) << '\n';
        os << "power: " << num(r.power) << '\n';
        os << "static_power: " << num(r.static_power) << '\n';
        os << "outer_iters: " << r.outer_iters << '\n';
        os << "min_rank_ratio: " << num(r.min_rank_ratio) << '\n';
        os << "fallback: " << (r.fallback ? "yes" : "no") << '\n';
        os << "rates:";
        for (double v : r.rates)
            os << ' ' << num(v);
        os << "\nee_trace:";
        for (double v : r.ee_trace)
            os << ' ' << num(v);
        os << '\n';
        if (!r.phases.reflection.empty())
        {
            os << "reflection_phase:";
            for (const cx &v : r.phases.reflection)
                os << ' ' << num(std::arg(v));
            os << '\n';
        }
    }

} // namespace irsee
