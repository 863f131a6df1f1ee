#include <CLI11.hpp>

#include <cstdio>

#include "zsm/accept.hpp"
#include "zsm/config.hpp"
#include "zsm/run.hpp"
#include "zsm/zbw.hpp"

int main(int argc, char** argv) {
    CLI::App app{"zsm: stochastic-mechanics numerical laboratory"};
    app.require_subcommand(1);

    std::string cfg_path;
    auto* cmd_run = app.add_subcommand("run", "run an experiment from a JSON config");
    cmd_run->add_option("config", cfg_path, "config file")->required();

    int bohr_n = 10;
    auto* cmd_bohr = app.add_subcommand("bohr", "print the Bohr spectrum table");
    cmd_bohr->add_option("--n", bohr_n, "highest level");

    std::string cm_cfg;
    auto* cmd_cm = app.add_subcommand("cm-experiment", "quantum vs classical CM trajectories");
    cmd_cm->add_option("--config", cm_cfg, "config file")->required();

    std::string scaling_n = "4,8,16,32,64";
    auto* cmd_scaling = app.add_subcommand("scaling", "force scaling exponents");
    cmd_scaling->add_option("--N", scaling_n, "comma-separated particle counts");

    std::string cat_cfg;
    auto* cmd_cat = app.add_subcommand("cat-probe", "cat-state probe deflection");
    cmd_cat->add_option("--config", cat_cfg, "config file");

    std::string sn_cfg;
    auto* cmd_sn = app.add_subcommand("sn-ground", "self-gravitating ground state");
    cmd_sn->add_option("--config", sn_cfg, "config file");

    auto* cmd_check = app.add_subcommand("check", "run the acceptance suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            auto cfg = zsm::ExperimentConfig::load(cfg_path);
            auto rec = zsm::run_experiment(cfg);
            std::printf("%s\n", rec.to_json().dump(2).c_str());
            return rec.all_passed() ? 0 : 1;
        }
        if (cmd_bohr->parsed()) {
            std::printf("%3s %14s %14s %14s\n", "n", "r_n [m]", "E_n [eV]", "v_n [m/s]");
            for (const auto& lvl : zsm::bohr_table(bohr_n))
                std::printf("%3d %14.6e %14.6e %14.6e\n", lvl.n, lvl.r_m, lvl.E_eV, lvl.v_ms);
            return 0;
        }
        if (cmd_cm->parsed()) {
            auto cfg = zsm::ExperimentConfig::load(cm_cfg);
            cfg.experiment = "cm-experiment";
            auto rec = zsm::run_experiment(cfg);
            std::printf("%s\n", rec.to_json().dump(2).c_str());
            return rec.all_passed() ? 0 : 1;
        }
        if (cmd_scaling->parsed()) {
            zsm::ExperimentConfig cfg;
            cfg.experiment = "scaling";
            cfg.params = zsm::json::object();
            zsm::json list = zsm::json::array();
            std::size_t p = 0;
            while (p < scaling_n.size()) {
                auto q = scaling_n.find(',', p);
                if (q == std::string::npos)
                    q = scaling_n.size();
                list.push_back(std::stoi(scaling_n.substr(p, q - p)));
                p = q + 1;
            }
            cfg.params["N_list"] = list;
            auto rec = zsm::run_experiment(cfg);
            std::printf("%s\n", rec.to_json().dump(2).c_str());
            return rec.all_passed() ? 0 : 1;
        }
        if (cmd_cat->parsed()) {
            auto cfg = cat_cfg.empty() ? zsm::ExperimentConfig{} : zsm::ExperimentConfig::load(cat_cfg);
            cfg.experiment = "cat-probe";
            auto rec = zsm::run_experiment(cfg);
            std::printf("%s\n", rec.to_json().dump(2).c_str());
            return rec.all_passed() ? 0 : 1;
        }
        if (cmd_sn->parsed()) {
            auto cfg = sn_cfg.empty() ? zsm::ExperimentConfig{} : zsm::ExperimentConfig::load(sn_cfg);
            cfg.experiment = "sn-ground";
            auto rec = zsm::run_experiment(cfg);
            std::printf("%s\n", rec.to_json().dump(2).c_str());
            return rec.all_passed() ? 0 : 1;
        }
        if (cmd_check->parsed()) {
            const int failures = zsm::run_acceptance(true);
            std::printf("acceptance: %d criteria failed\n", failures);
            return failures == 0 ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
