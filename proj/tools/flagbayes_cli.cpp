// Copyright 2026 The flagbayes Authors
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

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "flagbayes/cli.hpp"

namespace fc = flagbayes::cli;

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> rule;
    std::optional<std::size_t> emit_every;
    std::optional<double> alpha0;
};

fc::ExperimentConfig load_config(const std::string& path, const Overrides& o) {
    fc::ExperimentConfig c;
    if (!path.empty()) {
        c = fc::parse_config(fc::detail::read_file(path));
    }
    if (o.seed) c.seed = *o.seed;
    if (o.emit_every) c.emit_every = *o.emit_every;
    if (o.alpha0) c.alpha0 = *o.alpha0;
    if (o.rule) {
        try {
            c.rule = flagbayes::parse_rule(*o.rule);
        } catch (const flagbayes::ParseError& e) {
            throw fc::ConfigError(e.what());
        }
    }
    fc::validate(c);
    return c;
}

template <class F>
int guarded(F&& f) {
    try {
        f();
        return fc::kOk;
    } catch (const fc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return fc::kConfig;
    } catch (const flagbayes::NumericContractError& e) {
        std::cerr << "numeric contract violated: " << e.what() << "\n";
        return fc::kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return fc::kData;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian Pauli-channel estimation from flag-gadget outcomes"};
    app.require_subcommand(1);

    Overrides ov;
    std::string config_path;
    std::string out_dir = "out";

    auto* sim = app.add_subcommand("simulate", "simulate a gadget experiment and estimate the channel");
    sim->add_option("--config", config_path, "experiment config (JSON)");
    sim->add_option("--seed", ov.seed, "override the config seed");
    sim->add_option("--rule", ov.rule, "exact_maximal | zeroth | first_order | mixture | noisy_single");
    sim->add_option("--emit-every", ov.emit_every, "snapshot every k shots");
    sim->add_option("--alpha0", ov.alpha0, "prior concentration");
    sim->add_option("--out", out_dir, "output directory");

    std::string prior_path, shots_path = "-", on_error = "skip";
    auto* upd = app.add_subcommand("update", "stream shot records through an estimator");
    upd->add_option("--config", config_path, "gate, stack, rule and alpha0 (JSON)");
    upd->add_option("--prior", prior_path, "prior channel (JSON)")->required();
    upd->add_option("--shots", shots_path, "shot records (JSON lines, '-' for stdin)");
    upd->add_option("--seed", ov.seed, "ignored; accepted for symmetry");
    upd->add_option("--rule", ov.rule, "update rule");
    upd->add_option("--emit-every", ov.emit_every, "print a snapshot line every k shots");
    upd->add_option("--alpha0", ov.alpha0, "prior concentration");
    upd->add_option("--on-error", on_error, "skip | abort")->check(CLI::IsMember({"skip", "abort"}));
    upd->add_option("--out", out_dir, "output directory for estimates.json");

    std::string gate = "cnot", stack = "maximal";
    auto* tab = app.add_subcommand("tables", "print outcome tables as CSV");
    tab->add_option("--gate", gate, "gate name or circuit string");
    tab->add_option("--stack", stack, "maximal | single")->check(CLI::IsMember({"maximal", "single"}));

    std::string preset;
    auto* rep = app.add_subcommand("reproduce", "run a figure preset");
    rep->add_option("--preset", preset, "fig4 | fig6 | fig7 | fig9")->required();
    rep->add_option("--seed", ov.seed, "seed");
    rep->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : fc::kConfig;
    }

    if (*sim) {
        return guarded([&] {
            auto c = load_config(config_path, ov);
            fc::write_simulation(fc::cmd_simulate(c), out_dir);
        });
    }
    if (*upd) {
        return guarded([&] {
            auto c = load_config(config_path, ov);
            auto prior = flagbayes::io::parse_channel(fc::detail::read_file(prior_path));
            auto mode = on_error == "abort" ? fc::OnError::Abort : fc::OnError::Skip;
            fc::UpdateResult res;
            if (shots_path == "-") {
                res = fc::cmd_update(prior, std::cin, c, mode, &std::cout, std::cerr);
            } else {
                std::ifstream in(shots_path);
                if (!in) throw fc::ConfigError("cannot open " + shots_path);
                res = fc::cmd_update(prior, in, c, mode, &std::cout, std::cerr);
            }
            std::filesystem::create_directories(out_dir);
            fc::detail::write_file(std::filesystem::path(out_dir) / "estimates.json",
                                   flagbayes::io::snapshot_document(res.final));
            if (res.skipped > 0) {
                std::cerr << "skipped " << res.skipped << " malformed records\n";
            }
        });
    }
    if (*tab) {
        return guarded([&] {
            try {
                std::cout << fc::cmd_tables(gate, stack);
            } catch (const flagbayes::ParseError& e) {
                throw fc::ConfigError(e.what());
            }
        });
    }
    return guarded([&] { fc::cmd_reproduce(preset, ov.seed, out_dir); });
}
