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

#include "ectcap/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ectcap/errors.hpp"

namespace ectcap {

std::string format_double(double v) {
    char buf[40];
    snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string table_to_csv(const Table &t) {
    std::string out;
    for (const auto &p : t.preamble) out += "# " + p + "\n";
    for (size_t i = 0; i < t.header.size(); ++i)
        out += t.header[i] + (i + 1 < t.header.size() ? "," : "");
    out += "\n";
    for (const auto &row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) out += row[i] + (i + 1 < row.size() ? "," : "");
        out += "\n";
    }
    return out;
}

static std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

Table table_from_csv(const std::string &text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    bool header_done = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            size_t start = line.size() > 1 && line[1] == ' ' ? 2 : 1;
            t.preamble.push_back(line.substr(start));
            continue;
        }
        if (!header_done) {
            t.header = split_csv_line(line);
            header_done = true;
        } else {
            t.rows.push_back(split_csv_line(line));
        }
    }
    return t;
}

std::string table_to_json(const Table &t) {
    nlohmann::json j;
    j["meta"] = t.preamble;
    j["rows"] = nlohmann::json::array();
    for (const auto &row : t.rows) {
        nlohmann::json obj;
        for (size_t i = 0; i < row.size() && i < t.header.size(); ++i) {
            // keep numeric cells numeric, leave the rest as strings
            char *end = nullptr;
            double v = std::strtod(row[i].c_str(), &end);
            if (end && *end == '\0' && !row[i].empty())
                obj[t.header[i]] = v;
            else
                obj[t.header[i]] = row[i];
        }
        j["rows"].push_back(obj);
    }
    return j.dump(2) + "\n";
}

void write_file_atomic(const std::string &path, const std::string &text) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open " + tmp + " for writing");
        out << text;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error(ErrorCode::InvalidArgument, "cannot rename " + tmp + " to " + path);
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// -------------------------------------------------------------- SVG plot

static double nice_log_floor(double v) { return std::pow(10.0, std::floor(std::log10(v))); }

std::string render_svg_plot(const std::string &title, const std::string &xlabel,
                            const std::string &ylabel, const std::vector<PlotSeries> &series,
                            bool log_y) {
    const int width = 760, height = 520;
    const int ml = 70, mr = 170, mt = 40, mb = 55;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto &s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            double y = s.y[i];
            if (log_y && !(y > 0.0)) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (!(xmax > xmin)) { xmin -= 1.0; xmax += 1.0; }
    if (!(ymax > ymin)) { ymin *= 0.5; ymax = ymin > 0 ? ymax * 2.0 : ymin + 1.0; }
    double ylo = log_y ? std::log10(ymin) : ymin;
    double yhi = log_y ? std::log10(ymax) : ymax;
    if (yhi - ylo < 1e-12) yhi = ylo + 1.0;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto py = [&](double y) {
        double t = log_y ? std::log10(y) : y;
        return height - mb - (t - ylo) / (yhi - ylo) * (height - mt - mb);
    };

    static const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << (ml + (width - ml - mr) / 2) << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    // frame
    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << (width - ml - mr)
        << "\" height=\"" << (height - mt - mb)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

    // x ticks
    int nx = 8;
    for (int i = 0; i <= nx; ++i) {
        double x = xmin + (xmax - xmin) * i / nx;
        svg << "<line x1=\"" << px(x) << "\" y1=\"" << (height - mb) << "\" x2=\"" << px(x)
            << "\" y2=\"" << (height - mb + 5) << "\" stroke=\"black\"/>\n";
        char lbl[32];
        snprintf(lbl, sizeof lbl, "%g", x);
        svg << "<text x=\"" << px(x) << "\" y=\"" << (height - mb + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << lbl
            << "</text>\n";
    }
    // y ticks
    if (log_y) {
        for (double v = nice_log_floor(ymin); v <= ymax * 1.0001; v *= 10.0) {
            if (v < ymin / 10.0) continue;
            double yy = std::max(std::min(v, ymax), ymin);
            svg << "<line x1=\"" << (ml - 5) << "\" y1=\"" << py(yy) << "\" x2=\"" << ml
                << "\" y2=\"" << py(yy) << "\" stroke=\"black\"/>\n";
            char lbl[32];
            snprintf(lbl, sizeof lbl, "%.0e", v);
            svg << "<text x=\"" << (ml - 8) << "\" y=\"" << (py(yy) + 4)
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << lbl
                << "</text>\n";
        }
    } else {
        int ny = 6;
        for (int i = 0; i <= ny; ++i) {
            double v = ymin + (ymax - ymin) * i / ny;
            svg << "<line x1=\"" << (ml - 5) << "\" y1=\"" << py(v) << "\" x2=\"" << ml
                << "\" y2=\"" << py(v) << "\" stroke=\"black\"/>\n";
            char lbl[32];
            snprintf(lbl, sizeof lbl, "%.3g", v);
            svg << "<text x=\"" << (ml - 8) << "\" y=\"" << (py(v) + 4)
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << lbl
                << "</text>\n";
        }
    }
    svg << "<text x=\"" << (ml + (width - ml - mr) / 2) << "\" y=\"" << (height - 14)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xlabel
        << "</text>\n";
    svg << "<text x=\"18\" y=\"" << (mt + (height - mt - mb) / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << (mt + (height - mt - mb) / 2) << ")\">" << ylabel
        << "</text>\n";

    int ci = 0;
    for (const auto &s : series) {
        const char *col = colors[ci % 8];
        std::ostringstream pts;
        bool pen_up = true;
        std::string path;
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (log_y && !(s.y[i] > 0.0)) { pen_up = true; continue; }
            char seg[64];
            snprintf(seg, sizeof seg, "%c%.2f %.2f ", pen_up ? 'M' : 'L', px(s.x[i]),
                     py(s.y[i]));
            path += seg;
            pen_up = false;
        }
        svg << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << col
            << "\" stroke-width=\"1.6\"/>\n";
        int ly = mt + 18 + 18 * ci;
        svg << "<line x1=\"" << (width - mr + 10) << "\" y1=\"" << ly << "\" x2=\""
            << (width - mr + 34) << "\" y2=\"" << ly << "\" stroke=\"" << col
            << "\" stroke-width=\"1.6\"/>\n";
        svg << "<text x=\"" << (width - mr + 40) << "\" y=\"" << (ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.name << "</text>\n";
        ++ci;
    }
    svg << "</svg>\n";
    return svg.str();
}

// ----------------------------------------------------------- run config

std::vector<double> SnrGrid::db_values() const {
    validate();
    std::vector<double> v(size_t(points), 0.0);
    for (int i = 0; i < points; ++i)
        v[size_t(i)] = start_db + (stop_db - start_db) * i / (points - 1);
    return v;
}

std::vector<double> SnrGrid::linear_values() const {
    auto db = db_values();
    for (auto &x : db) x = std::pow(10.0, x / 10.0);
    return db;
}

void SnrGrid::validate() const {
    if (points < 2) throw Error(ErrorCode::InvalidArgument, "snr grid needs at least 2 points");
    if (!(start_db < stop_db))
        throw Error(ErrorCode::InvalidArgument, "snr grid requires start_db < stop_db");
}

RunConfig run_config_from_json_text(const std::string &text) {
    nlohmann::json j = nlohmann::json::parse(text);
    RunConfig cfg;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string &key = it.key();
        if (key != "channel" && key != "constraint" && key != "snr_grid" && key != "ect" &&
            key != "quadrature" && key != "mc" && key != "output" && key != "strict" &&
            key != "bits" && key != "threads")
            throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
    }
    if (j.contains("channel"))
        cfg.channel = channel_spec_from_json_text(j.at("channel").dump());
    if (j.contains("constraint")) {
        const auto &jc = j.at("constraint");
        std::string kind = jc.at("kind").get<std::string>();
        if (kind == "peak")
            cfg.constraint = PowerConstraint::peak();
        else if (kind == "quad")
            cfg.constraint = PowerConstraint::quadratic(jc.at("alpha").get<double>());
        else
            throw Error(ErrorCode::InvalidArgument, "constraint kind must be peak or quad");
    }
    if (j.contains("snr_grid")) {
        const auto &js = j.at("snr_grid");
        cfg.snr.start_db = js.at("start_db").get<double>();
        cfg.snr.stop_db = js.at("stop_db").get<double>();
        cfg.snr.points = js.at("points").get<int>();
    }
    if (j.contains("ect")) {
        const auto &je = j.at("ect");
        if (je.contains("k_max")) cfg.ect.k_max = je.at("k_max").get<int>();
        if (je.contains("rel_tol")) cfg.ect.rel_tol = je.at("rel_tol").get<double>();
        if (je.contains("k_step")) cfg.ect.k_step = je.at("k_step").get<int>();
    }
    if (j.contains("quadrature")) {
        const auto &jq = j.at("quadrature");
        if (jq.contains("order")) cfg.quadrature.order = jq.at("order").get<int>();
        if (jq.contains("abs_tol")) cfg.quadrature.abs_tol = jq.at("abs_tol").get<double>();
    }
    if (j.contains("mc")) {
        const auto &jm = j.at("mc");
        if (jm.contains("n_symbols")) cfg.mc.n_symbols = jm.at("n_symbols").get<int>();
        if (jm.contains("n_trials")) cfg.mc.n_trials = jm.at("n_trials").get<int>();
        if (jm.contains("seed")) cfg.mc.seed = jm.at("seed").get<std::uint64_t>();
        if (jm.contains("window")) cfg.mc.window = jm.at("window").get<int>();
    }
    if (j.contains("output")) {
        const auto &jo = j.at("output");
        if (jo.contains("format")) cfg.output.format = jo.at("format").get<std::string>();
        if (jo.contains("plot")) cfg.output.plot = jo.at("plot").get<std::string>();
        if (jo.contains("path")) cfg.output.path = jo.at("path").get<std::string>();
    }
    if (j.contains("strict")) cfg.strict = j.at("strict").get<bool>();
    if (j.contains("bits")) cfg.bits = j.at("bits").get<bool>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    return cfg;
}

} // namespace ectcap
