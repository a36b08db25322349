#include "qtorus/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace qtorus {

namespace {

std::string f2(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string f3g(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

ojson cplx_json(cplx z) { return ojson::array({z.real(), z.imag()}); }

void uncertainty_fields(ojson& o, const UncertaintyReport& r, bool continuum_ok) {
    o["n"] = r.n;
    o["disp_u"] = r.disp_u;
    o["disp_v"] = r.disp_v;
    o["cross_sq"] = r.cross_sq;
    o["saturation_gap"] = r.saturation_gap;
    if (continuum_ok) {
        o["dq2"] = r.dq2;
        o["dp2"] = r.dp2;
        o["product"] = r.product;
        o["excess"] = r.excess;
        o["predicted_excess"] = r.predicted_excess;
    } else {
        o["dq2"] = nullptr;
        o["dp2"] = nullptr;
        o["product"] = nullptr;
        o["excess"] = nullptr;
        o["predicted_excess"] = nullptr;
    }
}

// shared SVG frame: white canvas, title, axis lines, parameter echo in <desc>
struct SvgFrame {
    static constexpr double kW = 640.0, kH = 400.0;
    static constexpr double kLeft = 64.0, kRight = 616.0, kTop = 48.0, kBottom = 352.0;
    std::string body;

    SvgFrame(const std::string& title, const std::string& xlabel, const std::string& ylabel,
             const ParamEcho& echo) {
        body += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" "
                "height=\"400\" viewBox=\"0 0 640 400\">\n";
        body += "<desc>" + escape_xml(comment_block(echo)) + "</desc>\n";
        body += "<title>" + escape_xml(title) + "</title>\n";
        body += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"#ffffff\"/>\n";
        body += "<text x=\"320\" y=\"26\" font-family=\"monospace\" font-size=\"14\" "
                "text-anchor=\"middle\">" +
                escape_xml(title) + "</text>\n";
        body += "<text x=\"320\" y=\"390\" font-family=\"monospace\" font-size=\"12\" "
                "text-anchor=\"middle\">" +
                escape_xml(xlabel) + "</text>\n";
        body += "<text x=\"8\" y=\"40\" font-family=\"monospace\" font-size=\"11\">" +
                escape_xml(ylabel) + "</text>\n";
        body += "<line x1=\"64\" y1=\"352\" x2=\"616\" y2=\"352\" stroke=\"#000000\" "
                "stroke-width=\"1\"/>\n";
        body += "<line x1=\"64\" y1=\"48\" x2=\"64\" y2=\"352\" stroke=\"#000000\" "
                "stroke-width=\"1\"/>\n";
    }

    void xtick(double px, const std::string& label) {
        body += "<line x1=\"" + f2(px) + "\" y1=\"352\" x2=\"" + f2(px) +
                "\" y2=\"357\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
        body += "<text x=\"" + f2(px) +
                "\" y=\"370\" font-family=\"monospace\" font-size=\"11\" "
                "text-anchor=\"middle\">" +
                escape_xml(label) + "</text>\n";
    }

    void ytick(double py, const std::string& label) {
        body += "<line x1=\"59\" y1=\"" + f2(py) + "\" x2=\"64\" y2=\"" + f2(py) +
                "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
        body += "<text x=\"56\" y=\"" + f2(py + 4.0) +
                "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">" +
                escape_xml(label) + "</text>\n";
    }

    std::string finish() { return body + "</svg>\n"; }
};

}  // namespace

std::string fmt_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("atomic_write: short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string comment_block(const ParamEcho& echo) {
    std::string out = std::string("# ") + kVersion + "\n";
    for (const auto& [key, value] : echo) out += "# " + key + " = " + value + "\n";
    return out;
}

ojson meta_json(const ParamEcho& echo) {
    ojson params = ojson::object();
    for (const auto& [key, value] : echo) params[key] = value;
    ojson o = ojson::object();
    o["version"] = kVersion;
    o["params"] = params;
    return o;
}

ojson identity_report_json(const IdentityReport& r, const ParamEcho& echo) {
    ojson o = meta_json(echo);
    o["n"] = r.n;
    ojson items = ojson::array();
    for (const auto& c : r.identities)
        items.push_back(ojson{{"name", c.name}, {"residual", c.residual}, {"pass", c.pass}});
    o["identities"] = std::move(items);
    o["all_pass"] = r.all_pass();
    return o;
}

ojson state_json(const StateVector& s, const ParamEcho& echo) {
    ojson o = meta_json(echo);
    o["n"] = s.params.n;
    ojson c = ojson::array();
    for (const auto& z : s.c) c.push_back(cplx_json(z));
    o["c"] = std::move(c);
    return o;
}

std::string state_sites_csv(const StateVector& s, const ParamEcho& echo) {
    std::string out = comment_block(echo) + "j,prob,re,im\n";
    for (int j = 0; j < s.params.n; ++j) {
        out += std::to_string(j) + "," + fmt_g17(std::norm(s.c[j])) + "," +
               fmt_g17(s.c[j].real()) + "," + fmt_g17(s.c[j].imag()) + "\n";
    }
    return out;
}

std::string state_momentum_csv(const StateVector& s, const ParamEcho& echo) {
    std::string out = comment_block(echo) + "k,prob\n";
    for (int k = 0; k < s.params.n; ++k)
        out += std::to_string(k) + "," + fmt_g17(std::norm(s.d[k])) + "\n";
    return out;
}

ojson expectations_json(const ExpectationSet& e, const ParamEcho& echo) {
    ojson o = meta_json(echo);
    o["exp_u"] = cplx_json(e.exp_u);
    o["exp_v"] = cplx_json(e.exp_v);
    o["disp_u"] = e.disp_u;
    o["disp_v"] = e.disp_v;
    o["cross"] = cplx_json(e.cross);
    return o;
}

ojson uncertainty_json(const UncertaintyReport& r, bool continuum_ok, const std::string& note,
                       const ParamEcho& echo) {
    ojson o = meta_json(echo);
    uncertainty_fields(o, r, continuum_ok);
    if (!note.empty()) o["note"] = note;
    return o;
}

std::string uncertainty_csv(const std::vector<UncertaintyReport>& rows, const ParamEcho& echo) {
    std::string out =
        comment_block(echo) + "n,disp_u,disp_v,cross_sq,gap,dq2,dp2,product,excess,predicted_excess\n";
    for (const auto& r : rows) {
        out += std::to_string(r.n) + "," + fmt_g17(r.disp_u) + "," + fmt_g17(r.disp_v) + "," +
               fmt_g17(r.cross_sq) + "," + fmt_g17(r.saturation_gap) + "," + fmt_g17(r.dq2) +
               "," + fmt_g17(r.dp2) + "," + fmt_g17(r.product) + "," + fmt_g17(r.excess) + "," +
               fmt_g17(r.predicted_excess) + "\n";
    }
    return out;
}

std::string trace_csv(const EvolutionTrace& tr, const ParamEcho& echo) {
    std::string out = comment_block(echo) + "t,abs_survival,arg_survival,width\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        out += fmt_g17(tr.times[i]) + "," + fmt_g17(std::abs(tr.survival[i])) + "," +
               fmt_g17(std::arg(tr.survival[i])) + "," + fmt_g17(tr.widths[i]) + "\n";
    }
    return out;
}

std::string trace_frames_csv(const EvolutionTrace& tr, const ParamEcho& echo) {
    std::string out = comment_block(echo) + "t,j,prob\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const std::string t = fmt_g17(tr.times[i]);
        for (std::size_t j = 0; j < tr.site_probs[i].size(); ++j)
            out += t + "," + std::to_string(j) + "," + fmt_g17(tr.site_probs[i][j]) + "\n";
    }
    return out;
}

ojson trace_json(const EvolutionTrace& tr, const ParamEcho& echo) {
    ojson o = meta_json(echo);
    o["times"] = tr.times;
    ojson abs_s = ojson::array(), arg_s = ojson::array();
    for (const auto& a : tr.survival) {
        abs_s.push_back(std::abs(a));
        arg_s.push_back(std::arg(a));
    }
    o["abs_survival"] = std::move(abs_s);
    o["arg_survival"] = std::move(arg_s);
    o["widths"] = tr.widths;
    o["site_probs"] = tr.site_probs;
    return o;
}

ojson revival_report_json(const RevivalReport& r) {
    ojson o = ojson::object();
    o["method"] = r.method == RevivalMethod::grid ? "grid" : "spectral";
    switch (r.kind) {
        case RevivalKind::exact: o["kind"] = "exact"; break;
        case RevivalKind::approximate: o["kind"] = "approximate"; break;
        case RevivalKind::none: o["kind"] = "none"; break;
    }
    if (r.period)
        o["period"] = *r.period;
    else
        o["period"] = nullptr;
    o["residual"] = r.residual;
    if (r.translated_offset)
        o["translated_offset"] = *r.translated_offset;
    else
        o["translated_offset"] = nullptr;
    return o;
}

ojson revival_json(const RevivalReport& grid, const RevivalReport& spectral, bool consistent,
                   const std::string& note, const ParamEcho& echo) {
    ojson o = meta_json(echo);
    o["grid"] = revival_report_json(grid);
    o["spectral"] = revival_report_json(spectral);
    o["consistent"] = consistent;
    o["note"] = note;
    return o;
}

ojson scaling_json(const std::vector<UncertaintyReport>& rows, const ScalingFit* fit,
                   const std::string& note, const ParamEcho& echo) {
    ojson o = meta_json(echo);
    ojson reports = ojson::array();
    for (const auto& r : rows) {
        ojson row = ojson::object();
        uncertainty_fields(row, r, true);
        reports.push_back(std::move(row));
    }
    o["reports"] = std::move(reports);
    if (fit) {
        o["fit"] = ojson{{"n_values", fit->n_values},
                         {"excesses", fit->excesses},
                         {"exponent", fit->exponent},
                         {"amplitude", fit->amplitude},
                         {"r_squared", fit->r_squared}};
    } else {
        o["fit"] = nullptr;
    }
    o["note"] = note;
    return o;
}

std::string svg_bars(const std::string& title, const std::string& xlabel,
                     const std::string& ylabel, const std::vector<double>& values,
                     const ParamEcho& echo) {
    SvgFrame fr(title, xlabel, ylabel, echo);
    const int n = static_cast<int>(values.size());
    double vmax = 0.0;
    for (double v : values) vmax = std::max(vmax, v);
    if (vmax <= 0.0) vmax = 1.0;
    const double w = (SvgFrame::kRight - SvgFrame::kLeft) / std::max(1, n);
    const double span = SvgFrame::kBottom - SvgFrame::kTop;
    for (int i = 0; i < n; ++i) {
        const double h = std::max(0.0, values[i]) / vmax * span;
        fr.body += "<rect x=\"" + f2(SvgFrame::kLeft + (i + 0.1) * w) + "\" y=\"" +
                   f2(SvgFrame::kBottom - h) + "\" width=\"" + f2(0.8 * w) + "\" height=\"" +
                   f2(h) + "\" fill=\"#3a6ea5\"/>\n";
    }
    std::vector<int> ticks{0, n / 4, n / 2, 3 * n / 4, n - 1};
    std::sort(ticks.begin(), ticks.end());
    ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
    for (int t : ticks) {
        if (t < 0 || t >= n) continue;
        fr.xtick(SvgFrame::kLeft + (t + 0.5) * w, std::to_string(t));
    }
    fr.ytick(SvgFrame::kBottom, "0");
    fr.ytick(SvgFrame::kTop, f3g(vmax));
    return fr.finish();
}

std::string svg_curve(const std::string& title, const std::string& xlabel,
                      const std::string& ylabel, const std::vector<double>& xs,
                      const std::vector<double>& ys, const ParamEcho& echo) {
    SvgFrame fr(title, xlabel, ylabel, echo);
    if (!xs.empty() && xs.size() == ys.size()) {
        double xmin = xs.front(), xmax = xs.front();
        for (double x : xs) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
        }
        if (xmax <= xmin) xmax = xmin + 1.0;
        double ymin = 0.0, ymax = 0.0;
        for (double y : ys) {
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
        if (ymax <= ymin) ymax = ymin + 1.0;
        auto px = [&](double x) {
            return SvgFrame::kLeft +
                   (x - xmin) / (xmax - xmin) * (SvgFrame::kRight - SvgFrame::kLeft);
        };
        auto py = [&](double y) {
            return SvgFrame::kBottom -
                   (y - ymin) / (ymax - ymin) * (SvgFrame::kBottom - SvgFrame::kTop);
        };
        std::string pts;
        for (std::size_t i = 0; i < xs.size(); ++i)
            pts += f2(px(xs[i])) + "," + f2(py(ys[i])) + " ";
        fr.body += "<polyline points=\"" + pts +
                   "\" fill=\"none\" stroke=\"#3a6ea5\" stroke-width=\"1.5\"/>\n";
        for (int i = 0; i <= 4; ++i) {
            const double x = xmin + (xmax - xmin) * i / 4.0;
            fr.xtick(px(x), f3g(x));
        }
        fr.ytick(py(ymin), f3g(ymin));
        fr.ytick(py(ymax), f3g(ymax));
    }
    return fr.finish();
}

std::string svg_loglog(const std::string& title, const std::vector<int>& ns,
                       const std::vector<double>& excesses, double exponent, double amplitude,
                       const ParamEcho& echo) {
    SvgFrame fr(title, "n (log)", "excess (log)", echo);
    std::vector<double> lx, ly;
    std::vector<int> used;
    for (std::size_t i = 0; i < ns.size() && i < excesses.size(); ++i) {
        if (excesses[i] > 0.0) {
            lx.push_back(std::log10(static_cast<double>(ns[i])));
            ly.push_back(std::log10(excesses[i]));
            used.push_back(ns[i]);
        }
    }
    if (!lx.empty()) {
        double xmin = lx.front(), xmax = lx.front();
        for (double x : lx) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
        }
        if (xmax <= xmin) xmax = xmin + 1.0;
        double ymin = ly.front(), ymax = ly.front();
        // the fitted line can leave the point range; include its endpoints
        const double lamp = std::log10(amplitude);
        const double lexp = exponent;  // log-log slope is base independent
        for (double y : {lamp + lexp * xmin, lamp + lexp * xmax}) {
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
        for (double y : ly) {
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
        if (ymax <= ymin) ymax = ymin + 1.0;
        auto px = [&](double x) {
            return SvgFrame::kLeft +
                   (x - xmin) / (xmax - xmin) * (SvgFrame::kRight - SvgFrame::kLeft);
        };
        auto py = [&](double y) {
            return SvgFrame::kBottom -
                   (y - ymin) / (ymax - ymin) * (SvgFrame::kBottom - SvgFrame::kTop);
        };
        fr.body += "<line x1=\"" + f2(px(xmin)) + "\" y1=\"" + f2(py(lamp + lexp * xmin)) +
                   "\" x2=\"" + f2(px(xmax)) + "\" y2=\"" + f2(py(lamp + lexp * xmax)) +
                   "\" stroke=\"#b04a3a\" stroke-width=\"1.5\"/>\n";
        for (std::size_t i = 0; i < lx.size(); ++i) {
            fr.body += "<circle cx=\"" + f2(px(lx[i])) + "\" cy=\"" + f2(py(ly[i])) +
                       "\" r=\"4\" fill=\"#3a6ea5\"/>\n";
            fr.xtick(px(lx[i]), std::to_string(used[i]));
        }
        fr.ytick(py(ymin), f3g(std::pow(10.0, ymin)));
        fr.ytick(py(ymax), f3g(std::pow(10.0, ymax)));
    }
    return fr.finish();
}

}  // namespace qtorus
