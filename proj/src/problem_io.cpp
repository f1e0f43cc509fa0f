#include "rde/problem_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rde/errors.hpp"

namespace rde {

namespace {

using nlohmann::json;

std::string join(const std::string& base, const std::string& key) { return base + "/" + key; }
std::string join(const std::string& base, std::size_t idx) {
    return base + "/" + std::to_string(idx);
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(join(where, key), "missing required key");
    return *it;
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ParseError(where, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ValidationError(where, "value is not finite");
    return x;
}

Matrix parse_matrix(const json& v, int d, const std::string& where) {
    if (!v.is_array()) throw ParseError(where, "expected a nested array");
    if (static_cast<int>(v.size()) != d) {
        throw ValidationError(where, "expected " + std::to_string(d) + " rows, got " +
                                         std::to_string(v.size()));
    }
    Matrix m(d, d);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const json& row = v[i];
        const std::string rw = join(where, i);
        if (!row.is_array()) throw ParseError(rw, "expected an array row");
        if (static_cast<int>(row.size()) != d) {
            throw ValidationError(rw, "expected " + std::to_string(d) + " columns, got " +
                                          std::to_string(row.size()));
        }
        for (std::size_t j = 0; j < row.size(); ++j) {
            m(static_cast<int>(i), static_cast<int>(j)) = number(row[j], join(rw, j));
        }
    }
    return m;
}

Matrix checked_symmetric(const Matrix& m, const std::string& where) {
    const double tol = kSymmetryTol * (1.0 + m.max_abs());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = i + 1; j < m.cols(); ++j)
            if (std::abs(m(i, j) - m(j, i)) > tol) {
                throw ValidationError(where, "matrix is not symmetric at (" + std::to_string(i) +
                                                 "," + std::to_string(j) + ")");
            }
    return symmetrize(m).matrix();
}

Interpolation parse_interp(const json& v, const std::string& where) {
    if (!v.is_string()) throw ParseError(where, "expected \"linear\" or \"constant\"");
    const auto s = v.get<std::string>();
    if (s == "linear") return Interpolation::Linear;
    if (s == "constant") return Interpolation::ConstantLeft;
    throw ValidationError(where, "unknown interpolation \"" + s + "\"");
}

// Series value at t: exact at sample times, held constant outside the
// sampled range.
Matrix eval_series(const std::vector<double>& times, const std::vector<Matrix>& values,
                   Interpolation interp, double t) {
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const auto k = static_cast<std::size_t>(it - times.begin()) - 1;
    if (times[k] == t || interp == Interpolation::ConstantLeft) return values[k];
    const double w = (t - times[k]) / (times[k + 1] - times[k]);
    Matrix out = values[k];
    auto o = out.data();
    auto a = values[k].data();
    auto b = values[k + 1].data();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = (1.0 - w) * a[i] + w * b[i];
    return out;
}

MatrixPath parse_path(const json& v, int d, const TimeGrid& grid, bool symmetric,
                      const std::string& where) {
    if (v.is_array()) {
        Matrix m = parse_matrix(v, d, where);
        if (symmetric) m = checked_symmetric(m, where);
        return MatrixPath::constant(m, grid);
    }
    if (!v.is_object()) throw ParseError(where, "expected a nested array or a time series");

    Interpolation interp = Interpolation::Linear;
    if (auto it = v.find("interpolation"); it != v.end()) {
        interp = parse_interp(*it, join(where, "interpolation"));
    }
    const json& jt = require(v, "times", where);
    const json& jv = require(v, "values", where);
    if (!jt.is_array()) throw ParseError(join(where, "times"), "expected an array");
    if (!jv.is_array()) throw ParseError(join(where, "values"), "expected an array");
    if (jt.empty()) throw ValidationError(join(where, "times"), "time series is empty");
    if (jt.size() != jv.size()) {
        throw ValidationError(where, "times and values have different lengths");
    }

    std::vector<double> times;
    std::vector<Matrix> values;
    for (std::size_t i = 0; i < jt.size(); ++i) {
        const std::string tw = join(join(where, "times"), i);
        const double t = number(jt[i], tw);
        if (t < 0.0 || t > grid.horizon()) {
            throw ValidationError(tw, "time outside [0, horizon]");
        }
        if (!times.empty() && !(t > times.back())) {
            throw ValidationError(tw, "times must be strictly increasing");
        }
        times.push_back(t);
        const std::string vw = join(join(where, "values"), i);
        Matrix m = parse_matrix(jv[i], d, vw);
        if (symmetric) m = checked_symmetric(m, vw);
        values.push_back(std::move(m));
    }
    return MatrixPath::sample(
        grid, [&](double t) { return eval_series(times, values, interp, t); }, interp);
}

const char* interp_name(Interpolation i) {
    return i == Interpolation::ConstantLeft ? "constant" : "linear";
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json path_json(const MatrixPath& p) {
    const auto& s = p.samples();
    const bool constant = std::all_of(s.begin(), s.end(), [&](const Matrix& m) { return m == s.front(); });
    if (constant && p.interpolation() == Interpolation::Linear) return matrix_json(s.front());
    json times = json::array();
    json values = json::array();
    for (int k = 0; k < p.grid().n_nodes(); ++k) {
        times.push_back(p.grid().node(k));
        values.push_back(matrix_json(p.at_node(k)));
    }
    return json{{"times", times}, {"values", values}, {"interpolation", interp_name(p.interpolation())}};
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

RiccatiProblem parse_problem(const std::string& text, std::optional<int> grid_override) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("", "top level must be an object");

    const json& jd = require(doc, "dimension", "");
    if (!jd.is_number_integer() || jd.get<long long>() < 1 || jd.get<long long>() > 1000) {
        throw ValidationError("/dimension", "dimension must be a positive integer");
    }
    const int d = jd.get<int>();
    const double horizon = number(require(doc, "horizon", ""), "/horizon");
    if (!(horizon > 0.0)) throw ValidationError("/horizon", "horizon must be positive");

    int n_steps = kDefaultGridSteps;
    if (auto it = doc.find("grid_points"); it != doc.end()) {
        if (!it->is_number_integer()) throw ParseError("/grid_points", "expected an integer");
        const auto g = it->get<long long>();
        if (g < 2 || g > 10'000'000) throw ValidationError("/grid_points", "must be at least 2");
        n_steps = static_cast<int>(g);
    }
    if (grid_override) {
        if (*grid_override < 2) throw ValidationError("--grid", "must be at least 2");
        n_steps = *grid_override;
    }
    const TimeGrid grid(horizon, n_steps);

    const json& sys = require(doc, "system", "");
    const json& w = require(doc, "weights", "");
    auto sys_path = [&](const char* key) {
        return parse_path(require(sys, key, "/system"), d, grid, false, std::string("/system/") + key);
    };
    auto weight_path = [&](const char* key) {
        return parse_path(require(w, key, "/weights"), d, grid, true, std::string("/weights/") + key);
    };

    MatrixPath A = sys_path("A");
    MatrixPath B = sys_path("B");
    MatrixPath C = sys_path("C");
    MatrixPath D = sys_path("D");
    MatrixPath R = weight_path("R");
    MatrixPath Q = weight_path("Q");
    const json& jg = require(w, "G", "/weights");
    if (!jg.is_array()) throw ParseError("/weights/G", "G must be a constant nested array");
    SymMatrix G = SymMatrix::from_exact(checked_symmetric(parse_matrix(jg, d, "/weights/G"), "/weights/G"));

    RiccatiProblem prob{grid, std::move(A), std::move(B), std::move(C), std::move(D),
                        std::move(R), std::move(Q), std::move(G)};
    prob.validate();
    return prob;
}

RiccatiProblem load_problem(const std::filesystem::path& path, std::optional<int> grid_override) {
    std::ifstream in(path);
    if (!in) throw ParseError("", "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str(), grid_override);
}

std::string serialize_problem(const RiccatiProblem& prob) {
    json doc;
    doc["dimension"] = prob.dim();
    doc["horizon"] = prob.grid.horizon();
    doc["grid_points"] = prob.grid.n_steps();
    doc["system"] = {{"A", path_json(prob.A)},
                     {"B", path_json(prob.B)},
                     {"C", path_json(prob.C)},
                     {"D", path_json(prob.D)}};
    doc["weights"] = {{"R", path_json(prob.R)},
                      {"Q", path_json(prob.Q)},
                      {"G", matrix_json(prob.G.matrix())}};
    return doc.dump(2);
}

void write_solution_csv(std::ostream& os, const RiccatiSolution& sol) {
    const int d = sol.P.rows();
    os << "t";
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) os << ",P_" << i << "_" << j;
    os << ",gap\n";
    for (int k = 0; k < sol.P.grid().n_nodes(); ++k) {
        os << fmt(sol.P.grid().node(k));
        const Matrix& p = sol.P.at_node(k);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) os << ',' << fmt(p(i, j));
        os << ',' << fmt(sol.gap.scalar_at_node(k)) << '\n';
    }
}

void write_gain_csv(std::ostream& os, const RiccatiSolution& sol) {
    const int d = sol.gain.rows();
    os << "t";
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) os << ",K_" << i << "_" << j;
    os << '\n';
    for (int k = 0; k < sol.gain.grid().n_nodes(); ++k) {
        os << fmt(sol.gain.grid().node(k));
        const Matrix& g = sol.gain.at_node(k);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) os << ',' << fmt(g(i, j));
        os << '\n';
    }
}

std::string solution_json(const RiccatiSolution& sol) {
    json t = json::array(), p = json::array(), gain = json::array(), gap = json::array();
    for (int k = 0; k < sol.P.grid().n_nodes(); ++k) {
        t.push_back(sol.P.grid().node(k));
        p.push_back(matrix_json(sol.P.at_node(k)));
        gain.push_back(matrix_json(sol.gain.at_node(k)));
        gap.push_back(sol.gap.scalar_at_node(k));
    }
    json doc{{"t", t},
             {"P", p},
             {"gain", gain},
             {"gap", gap},
             {"iterations", sol.iterations},
             {"sup_residual", sol.sup_residual},
             {"iterate_history_norms", sol.iterate_history_norms}};
    return doc.dump(2);
}

}  // namespace rde
