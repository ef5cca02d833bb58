// Copyright 2026 The fisherlens authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "fisherlens/estimator.hpp"
#include "fisherlens/fisher.hpp"
#include "fisherlens/model.hpp"
#include "fisherlens/oracle.hpp"
#include "fisherlens/version.hpp"

namespace fisherlens::cli {
namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// formatting / CSV
// ---------------------------------------------------------------------------

std::string fmt12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string provenance(const RunConfig& cfg, const std::string& extra = {}) {
    std::string line = "# fisherlens ";
    line += kVersion;
    line += " config=";
    line += canonical_config(cfg);
    if (!extra.empty()) {
        line += ';';
        line += extra;
    }
    return line;
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::string& provenance_line,
              const std::string& header)
        : out_(path, std::ios::binary) {
        if (!out_) throw std::invalid_argument("cannot open output file: " + path);
        out_ << provenance_line << "\n" << header << "\n";
    }

    void row(std::initializer_list<std::string> cells) {
        bool first = true;
        for (const auto& c : cells) {
            if (!first) out_ << ',';
            out_ << c;
            first = false;
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

// ---------------------------------------------------------------------------
// SVG (convenience output only; nothing reads it back)
// ---------------------------------------------------------------------------

struct Curve {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> pts;
};

void write_svg(const std::string& path, const std::string& title,
               const std::vector<Curve>& curves) {
    constexpr int W = 720, H = 480, ML = 70, MR = 20, MT = 40, MB = 50;
    double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
    for (const Curve& c : curves)
        for (auto [x, y] : c.pts) {
            xmin = std::min(xmin, x); xmax = std::max(xmax, x);
            ymin = std::min(ymin, y); ymax = std::max(ymax, y);
        }
    if (!(xmax > xmin)) { xmax = xmin + 1; }
    if (!(ymax > ymin)) { ymax = ymin + 1; }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad; ymax += ypad;

    auto px = [&](double x) { return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double y) { return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB); };

    std::ofstream svg(path, std::ios::binary);
    if (!svg) throw std::invalid_argument("cannot open output file: " + path);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
        << "\" height=\"" << H << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";
    // axes
    svg << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR
        << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\""
        << H - MB << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 14
        << "\" text-anchor=\"middle\" font-size=\"13\">s</text>\n";
    svg << "<text x=\"18\" y=\"" << (MT + H - MB) / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
        << (MT + H - MB) / 2 << ")\">F</text>\n";
    for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const double xv = xmin + f * (xmax - xmin);
        const double yv = ymin + f * (ymax - ymin);
        svg << "<text x=\"" << px(xv) << "\" y=\"" << H - MB + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt12(std::round(xv * 100) / 100)
            << "</text>\n";
        svg << "<text x=\"" << ML - 8 << "\" y=\"" << py(yv) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << fmt12(std::round(yv * 1000) / 1000)
            << "</text>\n";
    }
    int legend_y = MT + 10;
    for (const Curve& c : curves) {
        svg << "<polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : c.pts) svg << px(x) << ',' << py(y) << ' ';
        svg << "\"/>\n";
        svg << "<text x=\"" << W - MR - 150 << "\" y=\"" << legend_y
            << "\" font-size=\"12\" fill=\"" << c.color << "\">" << c.label << "</text>\n";
        legend_y += 16;
    }
    svg << "</svg>\n";
}

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::filesystem::path out_path(const RunConfig& cfg, const std::string& fallback) {
    return cfg.out.empty() ? std::filesystem::path(fallback)
                           : std::filesystem::path(cfg.out);
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return v;
}

} // namespace

// ---------------------------------------------------------------------------
// angle expressions
// ---------------------------------------------------------------------------

double parse_angle_expr(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw std::invalid_argument("empty angle expression");

    std::size_t pos = 0;
    bool negative = false;
    if (t[pos] == '+' || t[pos] == '-') {
        negative = t[pos] == '-';
        ++pos;
    }

    auto factor = [&]() -> double {
        while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
        if (t.compare(pos, 2, "pi") == 0) {
            pos += 2;
            return kPi;
        }
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(t.substr(pos), &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad angle expression: " + text);
        }
        pos += used;
        return v;
    };

    double value = factor();
    while (true) {
        while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
        if (pos >= t.size()) break;
        const char op = t[pos];
        if (op != '*' && op != '/')
            throw std::invalid_argument("bad angle expression: " + text);
        ++pos;
        const double f = factor();
        value = (op == '*') ? value * f : value / f;
    }
    return negative ? -value : value;
}

// ---------------------------------------------------------------------------
// config file
// ---------------------------------------------------------------------------

std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::map<std::string, std::string> pairs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected 'key = value'");
        pairs[trim(stripped.substr(0, eq))] = trim(stripped.substr(eq + 1));
    }
    return pairs;
}

void apply_config_pair(RunConfig& cfg, const std::string& key,
                       const std::string& value) {
    auto as_double = [&] { return std::stod(value); };
    auto as_int = [&] { return std::stoi(value); };
    auto as_bool = [&] {
        if (value == "true" || value == "1") return true;
        if (value == "false" || value == "0") return false;
        throw std::invalid_argument("bad boolean: " + value);
    };
    try {
        if (key == "sigma") cfg.sigma = as_double();
        else if (key == "r") cfg.r = as_double();
        else if (key == "alpha") cfg.alpha = parse_angle_expr(value);
        else if (key == "phi") cfg.phi = parse_angle_expr(value);
        else if (key == "s_min") cfg.s_min = as_double();
        else if (key == "s_max") cfg.s_max = as_double();
        else if (key == "points") cfg.points = as_int();
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "m") cfg.m = as_int();
        else if (key == "trials") cfg.trials = as_int();
        else if (key == "s_true") cfg.s_true = as_double();
        else if (key == "grid_n") cfg.grid_n = as_int();
        else if (key == "out") cfg.out = value;
        else if (key == "figure") cfg.figure = value;
        else if (key == "with_oracle") cfg.with_oracle = as_bool();
        else if (key == "svg") cfg.emit_svg = as_bool();
        else throw std::invalid_argument("unknown config key: " + key);
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad value for config key '" + key + "': " + value);
    }
}

std::string canonical_config(const RunConfig& cfg) {
    std::map<std::string, std::string> kv;
    kv["command"] = cfg.command;
    if (!cfg.figure.empty()) kv["figure"] = cfg.figure;
    kv["sigma"] = fmt12(cfg.sigma);
    kv["r"] = fmt12(cfg.r);
    kv["alpha"] = fmt12(cfg.alpha);
    kv["phi"] = fmt12(cfg.phi);
    kv["s_min"] = fmt12(cfg.s_min);
    kv["s_max"] = fmt12(cfg.s_max);
    kv["points"] = std::to_string(cfg.points);
    kv["seed"] = std::to_string(cfg.seed);
    if (cfg.command == "crb") {
        kv["m"] = std::to_string(cfg.m);
        kv["trials"] = std::to_string(cfg.trials);
        kv["s_true"] = fmt12(cfg.s_true);
    }
    if (cfg.command == "oracle-check") kv["grid_n"] = std::to_string(cfg.grid_n);
    kv["with_oracle"] = cfg.with_oracle ? "1" : "0";
    std::string out;
    for (const auto& [k, v] : kv) {
        if (!out.empty()) out += ';';
        out += k + "=" + v;
    }
    return out;
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

SweepResult compute_sweep(const RunConfig& cfg) {
    if (!(cfg.s_min >= 0.0) || !(cfg.s_max > cfg.s_min) || cfg.points < 2)
        throw std::invalid_argument("sweep: need 0 <= s_min < s_max and points >= 2");
    const SourceModel model(cfg.sigma, cfg.r, cfg.phi);
    const AnalyzerBasis basis{cfg.alpha};
    const Grid grid = Grid::standard(cfg.sigma, cfg.s_max, cfg.grid_n);
    const double h = default_oracle_step(cfg.sigma);

    SweepResult result{cfg, {}};
    result.rows.reserve(cfg.points);
    for (double s : linspace(cfg.s_min, cfg.s_max, cfg.points)) {
        SweepRow row{s, f_tot(model, basis, s), f_unentangled(model, s), std::nullopt};
        if (cfg.with_oracle) {
            // the finite-difference oracle needs s >= h; splice the exact
            // s -> 0 limit in below that
            row.f_oracle = s >= h ? f_tot_numeric(model, basis, s, grid, h)
                                  : f_tot_limit0(model, basis);
        }
        result.rows.push_back(row);
    }
    return result;
}

int run_sweep(const RunConfig& cfg) {
    const SweepResult result = compute_sweep(cfg);
    std::string header = "s,f_tot,f_unentangled";
    if (cfg.with_oracle) header += ",f_oracle";
    CsvWriter csv(out_path(cfg, "sweep.csv").string(), provenance(cfg), header);
    for (const SweepRow& row : result.rows) {
        if (row.f_oracle)
            csv.row({fmt12(row.s), fmt12(row.f_tot), fmt12(row.f_unentangled),
                     fmt12(*row.f_oracle)});
        else
            csv.row({fmt12(row.s), fmt12(row.f_tot), fmt12(row.f_unentangled)});
    }
    return 0;
}

int run_reproduce(const RunConfig& cfg) {
    const std::vector<std::string> figures =
        (cfg.figure.empty() || cfg.figure == "all")
            ? std::vector<std::string>{"fig2a", "fig2b", "fig3a", "fig3b"}
            : std::vector<std::string>{cfg.figure};

    const std::filesystem::path dir = cfg.out.empty() ? "." : cfg.out;
    std::filesystem::create_directories(dir);

    const std::vector<double> ss = linspace(0.0, 5.0, 501);
    const double rs[] = {0.0, 0.25, 0.5, 1.0};
    const char* r_labels[] = {"r_0", "r_1_4", "r_1_2", "r_1"};
    const double angles[] = {kPi / 12.0, kPi / 8.0, kPi / 6.0, kPi / 4.0};
    const char* angle_labels[] = {"pi_12", "pi_8", "pi_6", "pi_4"};
    const char* colors[] = {"black", "green", "blue", "red"};

    for (const std::string& fig : figures) {
        if (fig != "fig2a" && fig != "fig2b" && fig != "fig3a" && fig != "fig3b")
            throw std::invalid_argument("reproduce: unknown figure id: " + fig);
        RunConfig note = cfg;
        note.figure = fig;
        note.s_min = 0.0;
        note.s_max = 5.0;
        note.points = 501;

        std::vector<Curve> curves;
        for (int c = 0; c < 4; ++c) {
            std::string label;
            std::vector<FiSample> samples(ss.size());
            if (fig == "fig2a" || fig == "fig2b") {
                note.r = rs[c];
                note.alpha = kPi / 6.0;
                note.phi = 0.0;
                label = std::string(r_labels[c]);
                const SourceModel model(1.0, rs[c], 0.0);
                const AnalyzerBasis basis{kPi / 6.0};
                for (std::size_t i = 0; i < ss.size(); ++i)
                    samples[i] = (fig == "fig2a")
                                     ? FiSample{ss[i], f_tot(model, basis, ss[i]),
                                                SourceTag::analytic4}
                                     : FiSample{ss[i], f_unentangled(model, ss[i]),
                                                SourceTag::analytic6};
            } else if (fig == "fig3a") {
                note.alpha = angles[c];
                note.r = 1.0;
                note.phi = 0.0;
                label = std::string("alpha_") + angle_labels[c];
                for (std::size_t i = 0; i < ss.size(); ++i)
                    samples[i] = {ss[i], f_balanced(angles[c], 0.0, 1.0, ss[i]),
                                  SourceTag::analytic7};
            } else { // fig3b: eta matched to the fig3a angle set, r = tan(eta)
                note.alpha = kPi / 4.0;
                note.r = std::tan(angles[c]);
                note.phi = 0.0;
                label = std::string("eta_") + angle_labels[c];
                for (std::size_t i = 0; i < ss.size(); ++i)
                    samples[i] = {ss[i], f_eta(angles[c], 0.0, 1.0, ss[i]),
                                  SourceTag::analytic8};
            }

            const std::string fname = fig + "_" + label + ".csv";
            CsvWriter csv((dir / fname).string(),
                          provenance(note, "curve=" + label), "s,f");
            Curve curve{label, colors[c], {}};
            curve.pts.reserve(ss.size());
            for (const FiSample& sample : samples) {
                csv.row({fmt12(sample.s), fmt12(sample.f)});
                curve.pts.emplace_back(sample.s, sample.f);
            }
            curves.push_back(std::move(curve));
        }
        if (cfg.emit_svg)
            write_svg((dir / (fig + ".svg")).string(), fig, curves);
    }
    return 0;
}

int run_sleast(const RunConfig& cfg) {
    // single row for an explicit --alpha; otherwise the preset angle grid
    const std::vector<double> alphas =
        cfg.alpha_explicit
            ? std::vector<double>{cfg.alpha}
            : std::vector<double>{kPi / 12.0, kPi / 10.0, kPi / 8.0,
                                  kPi / 6.0,  kPi / 5.0,  kPi / 4.0};

    CsvWriter csv(out_path(cfg, "sleast.csv").string(), provenance(cfg),
                  "alpha,r,phi,s_least_analytic,s_least_numeric,f_min,residual_eq9");
    for (double alpha : alphas) {
        const SourceModel model(cfg.sigma, cfg.r, cfg.phi);
        const AnalyzerBasis basis{alpha};
        const SLeastResult num = s_least_numeric(model, basis);
        const double residual = characteristic_residual(model, basis, num.s);

        std::string analytic;
        if (cfg.r == 1.0)
            analytic = fmt12(s_least_analytic(alpha, cfg.phi, cfg.sigma));
        else if (alpha == kPi / 4.0)
            analytic = fmt12(s_least_analytic(model.eta(), cfg.phi, cfg.sigma));
        csv.row({fmt12(alpha), fmt12(cfg.r), fmt12(cfg.phi), analytic,
                 fmt12(num.s), fmt12(num.f_min), fmt12(residual)});
    }
    return 0;
}

int run_oracle_check(const RunConfig& cfg) {
    constexpr double kTol = 1e-6;
    const double h = default_oracle_step(cfg.sigma);

    std::optional<CsvWriter> csv;
    if (!cfg.out.empty())
        csv.emplace(cfg.out, provenance(cfg), "s,alpha,r,phi,f_tot,f_oracle,rel_dev");

    double worst = 0.0;
    SweepPoint worst_pt{};
    double worst_fw_phi_half = 0.0;
    int count = 0;
    try {
        for (const SweepPoint& pt : standard_sweep()) {
            const SourceModel model(cfg.sigma, pt.r, pt.phi);
            const AnalyzerBasis basis{pt.alpha};
            const double s = pt.s * cfg.sigma;
            const Grid grid = Grid::standard(cfg.sigma, s, cfg.grid_n);
            const double ft = f_tot(model, basis, s);
            const double fo = f_tot_numeric(model, basis, s, grid, h);
            const double dev = std::abs(fo - ft) / std::max(ft, 1e-3);
            if (csv)
                csv->row({fmt12(s), fmt12(pt.alpha), fmt12(pt.r), fmt12(pt.phi),
                          fmt12(ft), fmt12(fo), fmt12(dev)});
            if (dev > worst) {
                worst = dev;
                worst_pt = pt;
            }
            if (pt.phi == kPi / 2.0)
                worst_fw_phi_half = std::max(
                    worst_fw_phi_half, std::abs(f_weights(model, basis, s, h)));
            ++count;
        }
    } catch (const GridError& e) {
        std::cerr << "oracle-check: " << e.what() << "\n";
        return 4;
    }

    std::cout << "oracle-check: " << count << " tuples, worst relative deviation "
              << fmt12(worst) << " at (s=" << fmt12(worst_pt.s)
              << ", alpha=" << fmt12(worst_pt.alpha) << ", r=" << fmt12(worst_pt.r)
              << ", phi=" << fmt12(worst_pt.phi) << ")\n";
    std::cout << "oracle-check: max |f_weights| on the phi=pi/2 subset "
              << fmt12(worst_fw_phi_half) << "\n";
    if (worst > kTol) {
        std::cerr << "oracle-check: FAIL, tolerance " << kTol << " exceeded\n";
        return 4;
    }
    std::cout << "oracle-check: PASS (tolerance " << kTol << ")\n";
    return 0;
}

int run_crb(const RunConfig& cfg) {
    const SourceModel model(cfg.sigma, cfg.r, cfg.phi);
    const AnalyzerBasis basis{cfg.alpha};
    const CrbReport rep =
        crb_experiment(model, basis, cfg.s_true, cfg.m, cfg.trials, cfg.seed);

    std::cout << "crb: s_true=" << fmt12(rep.s_true) << " trials=" << rep.trials
              << " m=" << rep.samples_per_trial << "\n"
              << "crb: mean estimate  " << fmt12(rep.mean_estimate) << "\n"
              << "crb: variance       " << fmt12(rep.variance) << "\n"
              << "crb: F_classical    " << fmt12(rep.f_classical)
              << "  (bound 1/(m F) = " << fmt12(rep.crb_classical) << ")\n"
              << "crb: F_tot          " << fmt12(rep.f_paper)
              << "  (bound 1/(m F) = " << fmt12(rep.crb_paper) << ")\n"
              << "crb: m*Var*F_cl     " << fmt12(rep.samples_per_trial * rep.variance * rep.f_classical)
              << "\n"
              << "crb: efficiency     " << fmt12(rep.efficiency) << "\n";

    if (!cfg.out.empty()) {
        CsvWriter csv(cfg.out, provenance(cfg),
                      "s_true,trials,m,mean_estimate,variance,f_classical,f_tot,"
                      "crb_classical,crb_paper,efficiency");
        csv.row({fmt12(rep.s_true), std::to_string(rep.trials),
                 std::to_string(rep.samples_per_trial), fmt12(rep.mean_estimate),
                 fmt12(rep.variance), fmt12(rep.f_classical), fmt12(rep.f_paper),
                 fmt12(rep.crb_classical), fmt12(rep.crb_paper), fmt12(rep.efficiency)});
    }
    return 0;
}

int run(const RunConfig& cfg) {
    if (cfg.command == "sweep") return run_sweep(cfg);
    if (cfg.command == "reproduce") return run_reproduce(cfg);
    if (cfg.command == "sleast") return run_sleast(cfg);
    if (cfg.command == "oracle-check") return run_oracle_check(cfg);
    if (cfg.command == "crb") return run_crb(cfg);
    throw std::invalid_argument("unknown command: " + cfg.command);
}

} // namespace fisherlens::cli
