#include "logsurf/parse.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "logsurf/errors.hpp"

namespace logsurf {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

const std::string& require_param(const SpecString& spec, const std::string& key)
{
    const auto it = spec.params.find(key);
    if (it == spec.params.end()) throw InputError("'" + spec.name + "' requires parameter " + key + "=");
    return it->second;
}

void allow_only(const SpecString& spec, std::initializer_list<const char*> keys)
{
    for (const auto& [k, v] : spec.params) {
        bool known = false;
        for (const char* key : keys) known = known || k == key;
        if (!known) throw InputError("unknown parameter '" + k + "' for '" + spec.name + "'");
    }
}

// Data lines of a text file with `#` comments and blank lines removed.
std::vector<std::vector<double>> read_rows(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::vector<double> row;
        std::string token;
        while (fields >> token) row.push_back(parse_real(token, path + ":" + std::to_string(lineno)));
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

double parse_real(const std::string& text, const std::string& what)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw InputError("expected a number for " + what + ", got '" + text + "'");
    return v;
}

SpecString split_spec(const std::string& text)
{
    SpecString out;
    const auto colon = text.find(':');
    out.name = trim(text.substr(0, colon));
    if (out.name.empty()) throw InputError("empty specification");
    if (colon == std::string::npos) return out;

    const std::string rest = text.substr(colon + 1);
    std::string key;
    std::size_t pos = 0;
    while (pos < rest.size()) {
        const auto eq = rest.find('=', pos);
        if (eq == std::string::npos) throw InputError("malformed parameter list in '" + text + "'");
        key = trim(rest.substr(pos, eq - pos));
        if (key.empty()) throw InputError("malformed parameter list in '" + text + "'");
        // the value runs to the comma that precedes the next key=
        std::size_t end = eq + 1;
        std::size_t next = std::string::npos;
        for (std::size_t c = rest.find(',', end); c != std::string::npos; c = rest.find(',', c + 1)) {
            const auto next_eq = rest.find('=', c);
            const auto next_comma = rest.find(',', c + 1);
            if (next_eq != std::string::npos && (next_comma == std::string::npos || next_eq < next_comma)) {
                next = c;
                break;
            }
        }
        end = next == std::string::npos ? rest.size() : next;
        if (out.params.count(key)) throw InputError("duplicate parameter '" + key + "' in '" + text + "'");
        out.params[key] = trim(rest.substr(eq + 1, end - eq - 1));
        pos = next == std::string::npos ? rest.size() : next + 1;
    }
    return out;
}

TabulatedPotential read_table_file(const std::string& path, Extrapolation extrapolation)
{
    const auto rows = read_rows(path);
    if (rows.empty()) throw InputError("table file is empty: " + path);
    for (const auto& r : rows)
        if (r.size() != 2) throw InputError("table rows must have two columns: " + path);
    if (rows.front()[0] != 0.0 || rows.front()[1] != 0.0) throw InputError("table must start with the row '0 0'");
    TabulatedPotential table;
    table.extrapolation = extrapolation;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        table.knots.push_back(rows[i][0]);
        table.values.push_back(rows[i][1]);
    }
    return table;
}

RadialPotential parse_measure(const std::string& text, bool allow_non_logconcave)
{
    const SpecString spec = split_spec(text);
    if (spec.name == "gaussian") {
        allow_only(spec, {});
        return make_gaussian();
    }
    if (spec.name == "gp") {
        allow_only(spec, {"p"});
        return make_power(parse_real(require_param(spec, "p"), "p"));
    }
    if (spec.name == "ball") {
        allow_only(spec, {"R"});
        return make_ball(parse_real(require_param(spec, "R"), "R"));
    }
    if (spec.name == "shell") {
        allow_only(spec, {"R", "eps"});
        return make_shell(parse_real(require_param(spec, "R"), "R"), parse_real(require_param(spec, "eps"), "eps"),
                          allow_non_logconcave);
    }
    if (spec.name == "table") {
        allow_only(spec, {"file", "extrapolation"});
        Extrapolation mode = Extrapolation::linear;
        if (const auto it = spec.params.find("extrapolation"); it != spec.params.end()) {
            if (it->second == "cutoff")
                mode = Extrapolation::hard_cutoff;
            else if (it->second != "linear")
                throw InputError("extrapolation must be 'linear' or 'cutoff'");
        }
        return make_tabulated(read_table_file(require_param(spec, "file"), mode));
    }
    throw InputError("unknown measure '" + spec.name + "'");
}

Polytope read_polytope_file(const std::string& path, int d)
{
    const auto rows = read_rows(path);
    if (rows.empty()) throw InputError("polytope file is empty: " + path);
    Eigen::MatrixXd dirs(static_cast<Eigen::Index>(rows.size()), d);
    Eigen::VectorXd offsets(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != static_cast<std::size_t>(d) + 1)
            throw InputError("polytope rows need " + std::to_string(d + 1) + " columns: " + path);
        for (int j = 0; j < d; ++j) dirs(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
        offsets[static_cast<Eigen::Index>(i)] = rows[i].back();
    }
    return make_polytope(dirs, offsets);
}

ConvexBody parse_body(const std::string& text, int d)
{
    const SpecString spec = split_spec(text);
    const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(d, 0);
    ConvexBody body;
    if (spec.name == "sphere") {
        allow_only(spec, {"R"});
        body = SphereShell{parse_real(require_param(spec, "R"), "R")};
    } else if (spec.name == "ball") {
        allow_only(spec, {"R"});
        body = Ball{parse_real(require_param(spec, "R"), "R")};
    } else if (spec.name == "halfspace") {
        allow_only(spec, {"rho"});
        body = HalfSpace{e1, parse_real(require_param(spec, "rho"), "rho")};
    } else if (spec.name == "slab") {
        allow_only(spec, {"rho1", "rho2"});
        body = Slab{e1, parse_real(require_param(spec, "rho1"), "rho1"), parse_real(require_param(spec, "rho2"), "rho2")};
    } else if (spec.name == "polytope") {
        allow_only(spec, {"file"});
        body = read_polytope_file(require_param(spec, "file"), d);
    } else if (spec.name == "box") {
        allow_only(spec, {"halfwidths"});
        std::vector<double> widths;
        std::istringstream list(require_param(spec, "halfwidths"));
        std::string item;
        while (std::getline(list, item, ',')) widths.push_back(parse_real(item, "halfwidths"));
        if (widths.size() == 1) widths.assign(static_cast<std::size_t>(d), widths.front());
        body = HyperRectangle{Eigen::Map<Eigen::VectorXd>(widths.data(), static_cast<Eigen::Index>(widths.size()))};
    } else {
        throw InputError("unknown body '" + spec.name + "'");
    }
    validate_body(body, d);
    return body;
}

std::optional<Polytope> as_polytope(const ConvexBody& body)
{
    if (const auto* h = std::get_if<HalfSpace>(&body)) return Polytope{h->direction.transpose(), Eigen::VectorXd::Constant(1, h->offset)};
    if (const auto* s = std::get_if<Slab>(&body)) {
        Eigen::MatrixXd dirs(2, s->direction.size());
        dirs.row(0) = s->direction.transpose();
        dirs.row(1) = -s->direction.transpose();
        Eigen::VectorXd offsets(2);
        offsets << s->upper, s->lower;
        return Polytope{dirs, offsets};
    }
    if (const auto* b = std::get_if<HyperRectangle>(&body)) return to_polytope(*b);
    if (const auto* p = std::get_if<Polytope>(&body)) return *p;
    return std::nullopt;
}

std::vector<int> parse_dims(const std::string& text)
{
    std::vector<std::string> parts;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ':')) parts.push_back(trim(item));
    if (parts.size() < 2 || parts.size() > 3) throw InputError("dimension range must look like a:b:geometric");
    const auto to_int = [](const std::string& s) {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
            throw InputError("expected an integer dimension, got '" + s + "'");
        return v;
    };
    const int a = to_int(parts[0]);
    const int b = to_int(parts[1]);
    const std::string mode = parts.size() == 3 ? parts[2] : "geometric";
    if (a < 2 || b < a) throw InputError("dimension range needs 2 <= a <= b");
    std::vector<int> dims;
    if (mode == "geometric") {
        for (long long d = a; d <= b; d *= 2) dims.push_back(static_cast<int>(d));
    } else if (mode == "linear") {
        for (int d = a; d <= b; ++d) dims.push_back(d);
    } else {
        throw InputError("dimension range mode must be 'geometric' or 'linear'");
    }
    return dims;
}

}  // namespace logsurf
