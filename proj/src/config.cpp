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

#include "json.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace irsee
{
    namespace
    {
        using nlohmann::json;

        // Reads the keys of one object and rejects the ones nobody asked for
        class Section
        {
        public:
            Section(const json &j, std::string name) : j_(j), name_(std::move(name))
            {
                if (!j_.is_object())
                    throw std::invalid_argument("config: section '" + name_ + "' must be an object");
            }

            bool has(const std::string &key) const { return j_.contains(key); }

            const json &at(const std::string &key)
            {
                seen_.insert(key);
                return j_.at(key);
            }

            template <class T>
            void read(const std::string &key, T &out)
            {
                if (!has(key))
                    return;
                try
                {
                    out = at(key).get<T>();
                }
                catch (const json::exception &)
                {
                    throw std::invalid_argument("config: bad value for '" + name_ + "." + key + "'");
                }
            }

            // Scalar broadcast to every user, or one entry per user
            template <class T>
            void read_per_user(const std::string &key, std::size_t K, std::vector<T> &out)
            {
                if (!has(key))
                {
                    if (out.size() != K)
                        out.assign(K, out.empty() ? T{} : out.front());
                    return;
                }
                const json &v = at(key);
                try
                {
                    if (v.is_array())
                    {
                        out = v.get<std::vector<T>>();
                        if (out.size() != K)
                            throw std::invalid_argument("config: '" + name_ + "." + key + "' needs one entry per user");
                    }
                    else
                        out.assign(K, v.get<T>());
                }
                catch (const json::exception &)
                {
                    throw std::invalid_argument("config: bad value for '" + name_ + "." + key + "'");
                }
            }

            Section sub(const std::string &key) { return Section(at(key), name_ + "." + key); }

            void finish() const
            {
                for (auto it = j_.begin(); it != j_.end(); ++it)
                    if (!seen_.count(it.key()))
                        throw std::invalid_argument("config: unknown key '" + name_ + "." + it.key() + "'");
            }

        private:
            const json &j_;
            std::string name_;
            std::set<std::string> seen_;
        };

        Position to_position(const json &v)
        {
            const auto a = v.get<std::vector<double>>();
            if (a.size() != 2)
                throw std::invalid_argument("config: positions are [x, y] pairs");
            return {a[0], a[1]};
        }

        void read_position(Section &sec, const std::string &key, Position &out)
        {
            if (!sec.has(key))
                return;
            try
            {
                out = to_position(sec.at(key));
            }
            catch (const json::exception &)
            {
                throw std::invalid_argument("config: bad position '" + key + "'");
            }
        }

        Scenario read_scenario(Section sec)
        {
            Scenario s = Scenario::defaults();
            sec.read("M", s.M);
            sec.read("N", s.N);
            sec.read("K", s.K);
            sec.read("L", s.L);
            sec.read("blocklength", s.blocklength);
            sec.read("seed", s.seed);

            if (!sec.has("deadline"))
                s.deadline.assign(s.K, s.L + 1);
            else
                sec.read_per_user("deadline", s.K, s.deadline);

            if (sec.has("qos"))
            {
                Section q = sec.sub("qos");
                q.read_per_user("eps", s.K, s.eps);
                q.read_per_user("r_min", s.K, s.r_min);
                q.finish();
            }
            s.eps.resize(s.K, s.eps.front());
            s.r_min.resize(s.K, s.r_min.front());

            double density = -174.0, bandwidth = 1e6;
            bool explicit_noise = false;
            if (sec.has("powers"))
            {
                Section p = sec.sub("powers");
                p.read("p_max", s.p_max);
                p.read("p_irs", s.p_irs);
                p.read("p_element", s.p_element);
                p.read("p_circuit", s.p_circuit);
                if (p.has("sigma2"))
                {
                    explicit_noise = true;
                    p.read_per_user("sigma2", s.K, s.sigma2);
                }
                p.read("noise_density_dbm_hz", density);
                p.read("bandwidth_hz", bandwidth);
                p.finish();
            }
            if (!explicit_noise)
                s.sigma2.assign(s.K, noise_power(density, bandwidth));

            if (sec.has("geometry"))
            {
                Section g = sec.sub("geometry");
                read_position(g, "bs_pos", s.bs_pos);
                read_position(g, "irs_pos", s.irs_pos);
                read_position(g, "area_min", s.area_min);
                read_position(g, "area_max", s.area_max);
                if (g.has("user_pos"))
                {
                    const json &u = g.at("user_pos");
                    if (!u.is_array())
                        throw std::invalid_argument("config: geometry.user_pos must be a list");
                    s.user_pos.clear();
                    try
                    {
                        for (const json &p : u)
                            s.user_pos.push_back(to_position(p));
                    }
                    catch (const json::exception &)
                    {
                        throw std::invalid_argument("config: bad position in geometry.user_pos");
                    }
                }
                g.finish();
            }
            sec.finish();
            s.validate();
            return s;
        }

        void read_solver(Section &sec, SolverOptions &o)
        {
            if (!sec.has("solver"))
                return;
            Section v = sec.sub("solver");
            v.read("tol", o.tol);
            v.read("max_iter", o.max_iter);
            v.finish();
        }

        void read_beamform(Section sec, BeamformConfig &b)
        {
            sec.read("max_outer", b.max_outer);
            sec.read("tol", b.tol);
            sec.read("penalty0", b.penalty0);
            sec.read("nu", b.nu);
            sec.read("theta_max", b.theta_max);
            sec.read("damping0", b.damping0);
            sec.read("damping_growth", b.damping_growth);
            sec.read("max_attempts", b.max_attempts);
            sec.read("qos_slack", b.qos_slack);
            sec.read("repair_passes", b.repair_passes);
            sec.read("rank_threshold", b.rank_threshold);
            sec.read("silent_power", b.silent_power);
            sec.read("randomization_candidates", b.randomization_candidates);
            sec.read("randomization_seed", b.randomization_seed);
            read_solver(sec, b.solver);
            sec.finish();
        }

        void read_phase(Section sec, PhaseConfig &p)
        {
            sec.read("max_iter", p.max_iter);
            sec.read("tol", p.tol);
            sec.read("penalty0", p.penalty0);
            sec.read("nu", p.nu);
            sec.read("theta_max", p.theta_max);
            sec.read("damping", p.damping);
            sec.read("qos_slack", p.qos_slack);
            sec.read("rank_threshold", p.rank_threshold);
            sec.read("randomization_candidates", p.randomization_candidates);
            sec.read("randomization_seed", p.randomization_seed);
            read_solver(sec, p.solver);
            sec.finish();
        }

        void read_ao(Section sec, AOConfig &a)
        {
            sec.read("max_outer", a.max_outer);
            sec.read("tol", a.tol);
            sec.read("warm_rho", a.warm_rho);
            sec.read("random_fixed_phases", a.random_fixed_phases);
            sec.read("fixed_phase_seed", a.fixed_phase_seed);
            sec.finish();
        }

        SweepSpec read_sweep(Section sec, const Scenario &base, const AOConfig &ao)
        {
            SweepSpec sp;
            sp.base = base;
            sp.ao = ao;
            std::string axis = to_string(sp.axis);
            sec.read("axis", axis);
            sp.axis = axis_from_string(axis);
            sec.read("grid", sp.grid);
            sec.read("drops", sp.drops);
            if (sec.has("schemes"))
            {
                std::vector<std::string> names;
                sec.read("schemes", names);
                sp.schemes.clear();
                for (const auto &n : names)
                    sp.schemes.push_back(scheme_from_string(n));
            }
            sec.read("output", sp.output);
            sec.read("jobs", sp.jobs);
            sec.finish();
            sp.validate();
            return sp;
        }

        json positions(const std::vector<Position> &v)
        {
            json a = json::array();
            for (const auto &p : v)
                a.push_back({p[0], p[1]});
            return a;
        }

        json solver_json(const SolverOptions &o) { return {{"tol", o.tol}, {"max_iter", o.max_iter}}; }
    } // namespace

    RunConfig parse_config(const std::string &text)
    {
        json j;
        try
        {
            j = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw std::invalid_argument(std::string("config: ") + e.what());
        }
        Section top(j, "config");
        RunConfig rc;
        if (top.has("scenario"))
            rc.scenario = read_scenario(top.sub("scenario"));
        if (top.has("ao"))
            read_ao(top.sub("ao"), rc.ao);
        if (top.has("beamform"))
            read_beamform(top.sub("beamform"), rc.ao.beamform);
        if (top.has("phase"))
            read_phase(top.sub("phase"), rc.ao.phase);
        if (top.has("sweep"))
            rc.sweep = read_sweep(top.sub("sweep"), rc.scenario, rc.ao);
        top.finish();
        return rc;
    }

    RunConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot read config file '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_config(ss.str());
    }

    std::string canonical_json(const SweepSpec &spec)
    {
        const Scenario &s = spec.base;
        const AOConfig &a = spec.ao;
        const BeamformConfig &b = a.beamform;
        const PhaseConfig &p = a.phase;
        json j;
        j["scenario"] = {
            {"M", s.M}, {"N", s.N}, {"K", s.K}, {"L", s.L},
            {"deadline", s.deadline}, {"blocklength", s.blocklength}, {"seed", s.seed},
            {"qos", {{"eps", s.eps}, {"r_min", s.r_min}}},
            {"powers", {{"p_max", s.p_max}, {"p_irs", s.p_irs}, {"p_element", s.p_element},
                        {"p_circuit", s.p_circuit}, {"sigma2", s.sigma2}}},
            {"geometry", {{"bs_pos", {s.bs_pos[0], s.bs_pos[1]}}, {"irs_pos", {s.irs_pos[0], s.irs_pos[1]}},
                          {"area_min", {s.area_min[0], s.area_min[1]}}, {"area_max", {s.area_max[0], s.area_max[1]}},
                          {"user_pos", positions(s.user_pos)}}}};
        j["ao"] = {{"max_outer", a.max_outer}, {"tol", a.tol}, {"warm_rho", a.warm_rho},
                   {"random_fixed_phases", a.random_fixed_phases}, {"fixed_phase_seed", a.fixed_phase_seed}};
        j["beamform"] = {{"max_outer", b.max_outer}, {"tol", b.tol}, {"penalty0", b.penalty0}, {"nu", b.nu},
                         {"theta_max", b.theta_max}, {"damping0", b.damping0}, {"damping_growth", b.damping_growth},
                         {"max_attempts", b.max_attempts}, {"qos_slack", b.qos_slack},
                         {"repair_passes", b.repair_passes}, {"rank_threshold", b.rank_threshold},
                         {"silent_power", b.silent_power},
                         {"randomization_candidates", b.randomization_candidates},
                         {"randomization_seed", b.randomization_seed}, {"solver", solver_json(b.solver)}};
        j["phase"] = {{"max_iter", p.max_iter}, {"tol", p.tol}, {"penalty0", p.penalty0}, {"nu", p.nu},
                      {"theta_max", p.theta_max}, {"damping", p.damping}, {"qos_slack", p.qos_slack},
                      {"rank_threshold", p.rank_threshold},
                      {"randomization_candidates", p.randomization_candidates},
                      {"randomization_seed", p.randomization_seed}, {"solver", solver_json(p.solver)}};
        std::vector<std::string> schemes;
        for (Scheme sc : spec.schemes)
            schemes.push_back(to_string(sc));
        j["sweep"] = {{"axis", to_string(spec.axis)}, {"grid", spec.grid}, {"drops", spec.drops}, {"schemes", schemes}};
        return j.dump();
    }

} // namespace irsee
