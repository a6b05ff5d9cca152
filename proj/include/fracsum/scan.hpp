#ifndef FRACSUM_SCAN_HPP
#define FRACSUM_SCAN_HPP

#include <atomic>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fracsum/asymptotics.hpp"
#include "fracsum/params.hpp"
#include "fracsum/rational.hpp"

namespace fracsum {

struct ScanConfig {
    Rational a, b;
    Rational x_start, x_stop;
    int grid = 2;
    double eps = 1e-12;
    int threads = 1;
    std::string output;
    enum class Format { Csv, Json } format = Format::Csv;

    void validate() const {
        Params check(a, b);
        if (!(x_start > 0)) throw DomainError("scan: x_start > 0 required");
        if (!(x_start < x_stop)) throw DomainError("scan: x_start < x_stop required");
        if (grid < 2) throw DomainError("scan: grid >= 2 required");
        if (!(eps > 0)) throw DomainError("scan: eps > 0 required");
        if (threads < 1) throw DomainError("scan: threads >= 1 required");
    }
};

/// Geometric grid with exact endpoints; interior points are rounded to
/// integers (log-equispaced before rounding) and kept strictly increasing.
inline std::vector<Rational> geometric_grid(const Rational& start, const Rational& stop,
                                            int points) {
    if (points < 2) throw DomainError("grid needs at least 2 points");
    std::vector<Rational> xs;
    xs.push_back(start);
    double l0 = std::log(start.get_d());
    double l1 = std::log(stop.get_d());
    for (int i = 1; i + 1 < points; ++i) {
        double t = l0 + (l1 - l0) * static_cast<double>(i) / (points - 1);
        Integer xi(static_cast<long>(std::llround(std::exp(t))));
        Rational cand(xi);
        if (cand <= xs.back()) cand = xs.back() + 1;
        if (cand >= stop) break;
        xs.push_back(cand);
    }
    if (stop > xs.back()) xs.push_back(stop);
    return xs;
}

/// Evaluates one ResidualSample per grid point, fanning points out over up
/// to cfg.threads workers; rows come back in increasing x regardless of the
/// thread count, so output bytes do not depend on scheduling.
inline std::vector<ResidualSample> run_scan(const ScanConfig& cfg) {
    cfg.validate();
    std::vector<Rational> xs = geometric_grid(cfg.x_start, cfg.x_stop, cfg.grid);
    std::vector<ResidualSample> rows(xs.size());
    int workers = std::min<int>(cfg.threads, static_cast<int>(xs.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < xs.size(); ++i)
            rows[i] = residual_sample(EvalContext(Params(cfg.a, cfg.b), xs[i]), cfg.eps);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= xs.size()) return;
            rows[i] = residual_sample(EvalContext(Params(cfg.a, cfg.b), xs[i]), cfg.eps);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    return rows;
}

inline constexpr const char* kScanHeader =
    "x_num,x_den,a,b,c,J,W_value,W_err,main_value,main_err,RJ_value,RJ_err,"
    "residual_A,residual_B,hypothesis_A_ok,hypothesis_B_ok";

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace detail

inline void write_scan_csv(std::ostream& out, const std::vector<ResidualSample>& rows) {
    out << kScanHeader << '\n';
    for (const ResidualSample& s : rows) {
        out << s.x.get_num().get_str() << ',' << s.x.get_den().get_str() << ','
            << to_string(s.a) << ',' << to_string(s.b) << ',' << to_string(s.c) << ','
            << detail::fmt_double(s.J) << ',' << s.W.value.str(25) << ','
            << s.W.err.str(3) << ',' << s.main.value.str(25) << ',' << s.main.err.str(3)
            << ',' << s.RJ.value.str(25) << ',' << s.RJ.err.str(3) << ','
            << s.residual_A.value.str(25) << ',' << s.residual_B.value.str(25) << ','
            << (s.hypothesis_A_ok ? '1' : '0') << ',' << (s.hypothesis_B_ok ? '1' : '0')
            << '\n';
    }
}

inline void write_scan_json(std::ostream& out, const std::vector<ResidualSample>& rows);

/// Parsed scan row: everything the exponent fit needs.
struct ScanRow {
    double x = 0;
    double residual_A = 0;
    double residual_B = 0;
    double err_A = 0;
    double err_B = 0;
};

inline std::vector<ScanRow> read_scan_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("scan file: empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kScanHeader)
        throw ParseError("scan file: header does not match the scan schema");
    std::vector<ScanRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 16) throw ParseError("scan file: wrong column count");
        ScanRow r;
        double xn = std::stod(cells[0]);
        double xd = std::stod(cells[1]);
        if (xd == 0) throw ParseError("scan file: zero x denominator");
        r.x = xn / xd;
        double w_err = std::stod(cells[7]);
        double main_err = std::stod(cells[9]);
        double rj_err = std::stod(cells[11]);
        r.residual_A = std::stod(cells[12]);
        r.residual_B = std::stod(cells[13]);
        r.err_B = w_err + main_err;
        r.err_A = r.err_B + rj_err;
        rows.push_back(r);
    }
    return rows;
}

inline FitResult fit_scan_rows(const std::vector<ScanRow>& rows, ResidualKind kind) {
    std::vector<FitPoint> pts;
    pts.reserve(rows.size());
    for (const ScanRow& r : rows) {
        if (kind == ResidualKind::A)
            pts.push_back({r.x, r.residual_A, r.err_A});
        else
            pts.push_back({r.x, r.residual_B, r.err_B});
    }
    return fit_points(pts);
}

}  // namespace fracsum

// json output sits behind the vendored header; kept out of line so the
// library core does not pull it in
#ifdef FRACSUM_WITH_JSON
#include "json.hpp"

namespace fracsum {

inline void write_scan_json(std::ostream& out, const std::vector<ResidualSample>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ResidualSample& s : rows) {
        nlohmann::json row;
        row["x_num"] = s.x.get_num().get_str();
        row["x_den"] = s.x.get_den().get_str();
        row["a"] = to_string(s.a);
        row["b"] = to_string(s.b);
        row["c"] = to_string(s.c);
        row["J"] = detail::fmt_double(s.J);
        row["W_value"] = s.W.value.str(25);
        row["W_err"] = s.W.err.str(3);
        row["main_value"] = s.main.value.str(25);
        row["main_err"] = s.main.err.str(3);
        row["RJ_value"] = s.RJ.value.str(25);
        row["RJ_err"] = s.RJ.err.str(3);
        row["residual_A"] = s.residual_A.value.str(25);
        row["residual_B"] = s.residual_B.value.str(25);
        row["hypothesis_A_ok"] = s.hypothesis_A_ok;
        row["hypothesis_B_ok"] = s.hypothesis_B_ok;
        arr.push_back(std::move(row));
    }
    out << arr.dump(2) << '\n';
}

}  // namespace fracsum
#endif

#endif
