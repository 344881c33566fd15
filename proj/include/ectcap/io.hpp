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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ectcap/bounds.hpp"
#include "ectcap/channel.hpp"
#include "ectcap/coherence.hpp"
#include "ectcap/mc.hpp"

namespace ectcap {

/// Plain table with optional '#' preamble lines; the common shape of every
/// CLI artifact. Cells are preformatted strings ('.' decimal separator,
/// "%.17g" for doubles so that parsing an emitted file is lossless).
struct Table {
    std::vector<std::string> preamble; // written as "# ..." lines
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string format_double(double v);

/// Serialize to CSV text ('\n' line endings, header row first after the
/// preamble).
std::string table_to_csv(const Table &t);

/// Parse CSV text produced by table_to_csv (preamble lines are retained).
Table table_from_csv(const std::string &text);

/// Serialize as a JSON document {"meta": [...], "rows": [{col: value}]}.
std::string table_to_json(const Table &t);

/// Write text to a file atomically (temp file + rename).
void write_file_atomic(const std::string &path, const std::string &text);

struct PlotSeries {
    std::string name;
    std::vector<double> x, y;
};

/// Self-contained static SVG line plot; y may be log-scaled.
std::string render_svg_plot(const std::string &title, const std::string &xlabel,
                            const std::string &ylabel, const std::vector<PlotSeries> &series,
                            bool log_y);

struct SnrGrid {
    double start_db = -40.0;
    double stop_db = 0.0;
    int points = 21;
    std::vector<double> db_values() const;
    std::vector<double> linear_values() const;
    void validate() const;
};

struct OutputSpec {
    std::string format = "csv"; // csv | json
    std::string plot = "none";  // none | svg
    std::string path;           // empty: stdout
};

struct RunConfig {
    std::optional<ChannelSpec> channel;
    PowerConstraint constraint = PowerConstraint::peak();
    SnrGrid snr;
    EctOptions ect;
    QuadratureSpec quadrature;
    McConfig mc;
    OutputSpec output;
    bool strict = false;
    bool bits = false; // emit rates in bits instead of nats
    int threads = 0;
};

/// Parse a RunConfig from JSON text; unknown keys are rejected.
RunConfig run_config_from_json_text(const std::string &text);

std::string read_file(const std::string &path);

} // namespace ectcap
