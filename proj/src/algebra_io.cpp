#include "bmt/algebra_io.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace bmt {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool valid_name(const std::string& s) {
    if (s.empty())
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '{' || c == '}'))
            return false;
    return !std::isdigit(static_cast<unsigned char>(s[0]));
}

}  // namespace

std::map<std::string, int> name_table(const std::vector<std::string>& names) {
    std::map<std::string, int> t;
    for (size_t i = 0; i < names.size(); ++i)
        t[names[i]] = int(i);
    return t;
}

Vec parse_combination(const std::map<std::string, int>& names, int dim, const std::string& expr) {
    Vec out = zero_vec(dim);
    std::string s = trim(expr);
    if (s.empty())
        throw InputError("empty expression");
    if (s == "0")
        return out;
    // split into signed terms
    size_t pos = 0;
    while (pos < s.size()) {
        int sign = 1;
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '+' || s[pos] == '-')) {
            if (s[pos] == '-')
                sign = -sign;
            ++pos;
        }
        size_t end = pos;
        while (end < s.size() && s[end] != '+' && s[end] != '-' && s[end] != ' ')
            ++end;
        std::string term = s.substr(pos, end - pos);
        pos = end;
        if (term.empty())
            continue;
        Rational coeff(sign);
        std::string name = term;
        auto star = term.find('*');
        if (star != std::string::npos) {
            coeff *= parse_rational(term.substr(0, star));
            name = term.substr(star + 1);
        }
        auto it = names.find(name);
        if (it == names.end())
            throw InputError("unknown basis name '" + name + "'");
        out[it->second] += coeff;
    }
    return out;
}

GradedAlgebra parse_algebra(const std::string& text) {
    GradedAlgebra a;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    enum class Section { None, Basis, Products } section = Section::None;
    std::string unit_name, orientation_name;
    bool have_dim = false;
    std::vector<std::pair<int, std::string>> product_lines;  // (line, text)

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#')
            continue;
        auto starts = [&](const char* kw) { return line.rfind(kw, 0) == 0; };
        if (starts("dimension:")) {
            try {
                a.formal_dim = std::stoi(trim(line.substr(10)));
            } catch (...) {
                throw ParseError(lineno, "bad dimension");
            }
            have_dim = true;
            section = Section::None;
        } else if (line == "basis:") {
            section = Section::Basis;
        } else if (starts("unit:")) {
            unit_name = trim(line.substr(5));
            section = Section::None;
        } else if (starts("orientation:")) {
            orientation_name = trim(line.substr(12));
            section = Section::None;
        } else if (line == "products:") {
            section = Section::Products;
        } else if (section == Section::Basis) {
            std::istringstream ls(line);
            std::string name;
            int deg;
            if (!(ls >> name >> deg) || deg < 0)
                throw ParseError(lineno, "expected 'name degree' in basis section");
            std::string rest;
            if (ls >> rest)
                throw ParseError(lineno, "trailing tokens after basis entry");
            if (!valid_name(name))
                throw ParseError(lineno, "invalid basis name '" + name + "'");
            for (const auto& n : a.names)
                if (n == name)
                    throw ParseError(lineno, "duplicate basis name '" + name + "'");
            a.names.push_back(name);
            a.degs.push_back(deg);
        } else if (section == Section::Products) {
            product_lines.emplace_back(lineno, line);
        } else {
            throw ParseError(lineno, "unexpected line '" + line + "'");
        }
    }
    if (!have_dim)
        throw ParseError(lineno, "missing dimension section");
    if (a.names.empty())
        throw ParseError(lineno, "missing basis section");
    auto names = name_table(a.names);
    if (unit_name.empty())
        throw ParseError(lineno, "missing unit section");
    if (!names.count(unit_name))
        throw ParseError(lineno, "unknown unit name '" + unit_name + "'");
    a.unit = names.at(unit_name);
    if (!orientation_name.empty()) {
        if (!names.count(orientation_name))
            throw ParseError(lineno, "unknown orientation name '" + orientation_name + "'");
        a.orientation = names.at(orientation_name);
    }
    a.init_table();
    std::set<std::pair<int, int>> seen;
    for (auto& [ln, line] : product_lines) {
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(ln, "product line without '='");
        std::string lhs = trim(line.substr(0, eq));
        auto star = lhs.find('*');
        if (star == std::string::npos)
            throw ParseError(ln, "product left side must be 'a*b'");
        std::string na = trim(lhs.substr(0, star)), nb = trim(lhs.substr(star + 1));
        if (!names.count(na) || !names.count(nb))
            throw ParseError(ln, "unknown basis name in product '" + lhs + "'");
        int i = names.at(na), j = names.at(nb);
        if (i > j)
            throw ParseError(ln, "products must be given for index-ordered pairs ('" + na + "' comes after '" + nb +
                                     "' in the basis list)");
        if (!seen.insert({i, j}).second)
            throw ParseError(ln, "duplicate product line for '" + lhs + "'");
        Vec value;
        try {
            value = parse_combination(names, a.dim(), line.substr(eq + 1));
        } catch (const InputError& e) {
            throw ParseError(ln, e.what());
        }
        a.set_product(i, j, std::move(value));
    }
    if (a.unit >= 0) {
        // unit products were implicit; reject explicit non-identity unit rows
        for (int i = 0; i < a.dim(); ++i)
            if (a.basis_product(a.unit, i) != a.basis_vec(i))
                throw ParseError(0, "unit products must be the identity");
    }
    return a;
}

std::string serialize_algebra(const GradedAlgebra& a) {
    std::ostringstream os;
    os << "dimension: " << a.formal_dim << "\n";
    os << "basis:\n";
    for (int i = 0; i < a.dim(); ++i)
        os << "  " << a.names[i] << " " << a.degs[i] << "\n";
    os << "unit: " << a.names[a.unit] << "\n";
    if (a.orientation)
        os << "orientation: " << a.names[*a.orientation] << "\n";
    os << "products:\n";
    for (int i = 0; i < a.dim(); ++i)
        for (int j = i; j < a.dim(); ++j) {
            if (i == a.unit || j == a.unit)
                continue;
            const Vec& p = a.basis_product(i, j);
            if (is_zero(p))
                continue;
            os << "  " << a.names[i] << "*" << a.names[j] << " =";
            bool first = true;
            for (int t = 0; t < a.dim(); ++t) {
                if (p[t] == 0)
                    continue;
                Rational c = p[t];
                if (first) {
                    os << " ";
                    if (c == -1)
                        os << "-";
                    else if (c != 1)
                        os << to_string(c) << "*";
                    first = false;
                } else {
                    if (c < 0) {
                        os << " - ";
                        c = -c;
                    } else {
                        os << " + ";
                    }
                    if (c != 1)
                        os << to_string(c) << "*";
                }
                os << a.names[t];
            }
            os << "\n";
        }
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot write '" + path + "'");
    out << content;
}

}  // namespace bmt
