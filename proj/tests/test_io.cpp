// SPDX-License-Identifier: Apache-2.0
//
// ectcap - capacity bounds for noncoherent underspread OFDM WSSUS fading channels
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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "ectcap/errors.hpp"
#include "ectcap/io.hpp"

using namespace ectcap;

TEST_CASE("CSV round trip is lossless") {
    Table t;
    t.preamble = {"preset demo: n_bins=30"};
    t.header = {"snr_db", "value", "flag"};
    t.rows.push_back({format_double(-38.5), format_double(1.0 / 3.0), "1"});
    t.rows.push_back({format_double(0.1), format_double(2.415650255319866e-7), "0"});
    std::string csv = table_to_csv(t);
    CHECK(csv.find("# preset demo") == 0);
    CHECK(csv.find("\r") == std::string::npos);
    Table back = table_from_csv(csv);
    CHECK(back.preamble == t.preamble);
    CHECK(back.header == t.header);
    REQUIRE(back.rows == t.rows);
    // stringified doubles parse back to the same bit pattern
    for (size_t i = 0; i < t.rows.size(); ++i) {
        double orig = std::strtod(t.rows[i][1].c_str(), nullptr);
        double redo = std::strtod(back.rows[i][1].c_str(), nullptr);
        CHECK(orig == redo);
    }
    CHECK(std::strtod(format_double(1.0 / 3.0).c_str(), nullptr) == 1.0 / 3.0);
}

TEST_CASE("JSON rendering keeps numbers numeric") {
    Table t;
    t.header = {"snr_db", "family"};
    t.rows.push_back({"-10", "qpsk"});
    std::string j = table_to_json(t);
    CHECK(j.find("\"snr_db\": -10") != std::string::npos);
    CHECK(j.find("\"family\": \"qpsk\"") != std::string::npos);
}

TEST_CASE("atomic file write and read back") {
    std::string path = "/tmp/ectcap_io_test.csv";
    write_file_atomic(path, "a,b\n1,2\n");
    CHECK(read_file(path) == "a,b\n1,2\n");
    std::remove(path.c_str());
}

TEST_CASE("SNR grid") {
    SnrGrid g{-20.0, 0.0, 5};
    auto db = g.db_values();
    REQUIRE(db.size() == 5);
    CHECK(db[0] == -20.0);
    CHECK(db[4] == 0.0);
    CHECK(db[2] == -10.0);
    auto lin = g.linear_values();
    CHECK(lin[2] == doctest::Approx(0.1));
    CHECK_THROWS_AS((SnrGrid{0.0, -1.0, 5}.validate()), Error);
    CHECK_THROWS_AS((SnrGrid{0.0, 1.0, 1}.validate()), Error);
}

TEST_CASE("run config parses and rejects unknown keys") {
    const char *text = R"({
      "channel": {"n_bins": 30, "taps": {"n_taps": 5},
                  "corr": {"kind": "ar1", "gamma": 0.9672}},
      "constraint": {"kind": "quad", "alpha": 10},
      "snr_grid": {"start_db": -50, "stop_db": 5, "points": 56},
      "ect": {"k_max": 8192, "rel_tol": 1e-6},
      "quadrature": {"order": 128},
      "mc": {"n_symbols": 4000, "n_trials": 64, "seed": 7, "window": 0},
      "output": {"format": "csv", "plot": "svg", "path": "out.csv"},
      "strict": true, "bits": false
    })";
    RunConfig cfg = run_config_from_json_text(text);
    REQUIRE(cfg.channel.has_value());
    CHECK(cfg.channel->n_bins == 30);
    CHECK_FALSE(cfg.constraint.is_peak());
    CHECK(cfg.constraint.alpha == 10.0);
    CHECK(cfg.snr.points == 56);
    CHECK(cfg.ect.k_max == 8192);
    CHECK(cfg.mc.seed == 7);
    CHECK(cfg.output.plot == "svg");
    CHECK(cfg.strict);
    CHECK_THROWS_AS(run_config_from_json_text(R"({"snrgrid": {}})"), Error);
}

TEST_CASE("SVG plot renders polylines for each series") {
    PlotSeries s1{"a", {0.0, 1.0, 2.0}, {1.0, 10.0, 100.0}};
    PlotSeries s2{"b", {0.0, 1.0, 2.0}, {2.0, 0.0, 20.0}}; // zero dropped on log axis
    std::string svg = render_svg_plot("demo", "x", "y", {s1, s2}, true);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find(">a</text>") != std::string::npos);
    CHECK(svg.find(">b</text>") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}
