#include <cstdio>
#include <filesystem>
#include <fstream>

#include "test_harness.hpp"
#include "zsm/config.hpp"
#include "zsm/io.hpp"
#include "zsm/run.hpp"
#include "zsm/wavefunction.hpp"

using namespace zsm;
namespace fs = std::filesystem;

int main() {
    test::Harness h;
    const std::string tmp = fs::temp_directory_path() / "zsm_io_test";
    fs::create_directories(tmp);

    // --- ZSMF round trip, complex and real
    {
        Grid g = make_grid(2, 16, 8.0);
        cvec field(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            field[i] = cplx(0.1 * static_cast<double>(i), -0.05 * static_cast<double>(i % 7));
        write_zsmf(tmp + "/c.zsmf", g, field);
        auto back = read_zsmf(tmp + "/c.zsmf");
        h.record("complex round trip grid", back.grid == g);
        h.record("complex round trip payload", back.is_complex && back.complex_field == field);

        dvec real(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            real[i] = std::sin(0.3 * static_cast<double>(i));
        write_zsmf(tmp + "/r.zsmf", g, real);
        auto back_r = read_zsmf(tmp + "/r.zsmf");
        h.record("real round trip payload", !back_r.is_complex && back_r.real_field == real);
    }

    // --- header is bit-exact: magic + version + dims + points + extent
    {
        Grid g = make_grid(1, 32, 4.0);
        write_zsmf(tmp + "/h.zsmf", g, dvec(g.size(), 1.0));
        std::ifstream in(tmp + "/h.zsmf", std::ios::binary);
        char magic[4];
        in.read(magic, 4);
        h.record("magic bytes ZSMF", std::string(magic, 4) == "ZSMF");
        std::uint32_t version, dims, points;
        in.read(reinterpret_cast<char*>(&version), 4);
        in.read(reinterpret_cast<char*>(&dims), 4);
        in.read(reinterpret_cast<char*>(&points), 4);
        double extent;
        in.read(reinterpret_cast<char*>(&extent), 8);
        h.record("header fields", version == kZsmfVersion && dims == 1 && points == 32 &&
                                      extent == 4.0);
    }

    // --- config validation
    {
        json ok = {{"experiment", "bohr"}, {"seed_root", 5}, {"params", {{"n_max", 4}}}};
        auto cfg = ExperimentConfig::parse(ok);
        h.record("valid config parses", cfg.experiment == "bohr" && cfg.seed_root == 5);

        h.expect_throw("unknown top-level key rejected", [] {
            ExperimentConfig::parse({{"experiment", "bohr"}, {"extra", 1}});
        });
        h.expect_throw("unknown experiment rejected",
                       [] { ExperimentConfig::parse({{"experiment", "nope"}}); });
        h.expect_throw("string where number expected names the path", [] {
            ExperimentConfig::parse(
                {{"experiment", "bohr"}, {"grid", {{"points", "many"}}}});
        });
        // the error message names the offending path
        try {
            ExperimentConfig::parse({{"experiment", "bohr"}, {"grid", {{"points", "many"}}}});
        } catch (const std::exception& e) {
            h.record("schema error names $.grid.points",
                     std::string(e.what()).find("$.grid.points") != std::string::npos, e.what());
        }

        // potential block: the documented schema parses, junk is rejected
        json with_pot = {{"experiment", "quantum-equilibrium"},
                         {"potential",
                          {{"external", json::array({{{"kind", "linear"}, {"slope", 0.4}}})},
                           {"pair", {{"kind", "gravity"}, {"G", 2.0}, {"eps", 0.3}}},
                           {"coupling_scale", 0.5}}}};
        auto pc = ExperimentConfig::parse(with_pot);
        h.record("potential block parses",
                 pc.has_potential && pc.potential.external_terms.size() == 1 &&
                     pc.potential.pair.kind == PairKernel::Kind::Gravity &&
                     pc.potential.coupling_scale == 0.5 && pc.constants.G == 2.0);
        h.expect_throw("unknown potential key rejected", [] {
            ExperimentConfig::parse(
                {{"experiment", "bohr"}, {"potential", {{"wrong", 1}}}});
        });
        h.expect_throw("unknown pair kind rejected", [] {
            ExperimentConfig::parse({{"experiment", "bohr"},
                                     {"potential", {{"pair", {{"kind", "strange"}}}}}});
        });
        // potential contributes to the config hash
        auto pc2 = ExperimentConfig::parse(with_pot);
        pc2.potential.pair.eps = 0.9;
        h.record("potential feeds the config hash", pc.config_hash() != pc2.config_hash());
    }

    // --- run reproducibility: identical config + seed => identical checksums
    {
        ExperimentConfig cfg;
        cfg.experiment = "bohr";
        cfg.output_dir = tmp + "/runA";
        auto recA = run_experiment(cfg);
        cfg.output_dir = tmp + "/runB";
        auto recB = run_experiment(cfg);
        h.record("bohr table checksums identical",
                 file_checksum(tmp + "/runA/bohr_table.csv") ==
                     file_checksum(tmp + "/runB/bohr_table.csv"));
        h.record("run record written", fs::exists(tmp + "/runA/run_record.json"));
        h.record("run passes own checks", recA.all_passed() && recB.all_passed());
    }

    // --- emit_plotdata and SVG
    {
        ExperimentConfig cfg;
        cfg.experiment = "classical-nls";
        cfg.grid_points = 256;
        cfg.grid_extent = 64.0;
        cfg.output_dir = tmp + "/nls";
        cfg.params = {{"T", 1.0}, {"dt", 2e-3}};
        auto rec = run_experiment(cfg);
        emit_plotdata(rec, tmp + "/nls", "width");
        h.record("series csv written", fs::exists(tmp + "/nls/width_series.csv"));
        h.record("svg chart written", fs::exists(tmp + "/nls/width.svg"));
        h.expect_throw("unknown series rejected",
                       [&] { emit_plotdata(rec, tmp + "/nls", "no_such_series"); });
        h.expect_throw("empty series rejected", [&] { emit_plotdata(rec, tmp + "/nls", ""); });

        // combined plot data across two runs
        emit_plotdata({{rec, "run A"}, {rec, "run B"}}, tmp + "/nls", "center");
        std::ifstream two(tmp + "/nls/center_series.csv");
        std::string l;
        int a_rows = 0, b_rows = 0;
        while (std::getline(two, l)) {
            if (l.find("run A") != std::string::npos)
                ++a_rows;
            if (l.find("run B") != std::string::npos)
                ++b_rows;
        }
        h.record("two-series csv carries both labels", a_rows > 0 && a_rows == b_rows);
    }

    // --- malformed config file
    {
        const std::string bad = tmp + "/bad.json";
        std::ofstream(bad) << "{ not json";
        h.expect_throw("parse error surfaces", [&] { ExperimentConfig::load(bad); });
    }

    fs::remove_all(tmp);
    return h.summary("io-config");
}
