#include "bmt/report.hpp"

#include <sstream>

#include "bmt/algebra_io.hpp"

namespace bmt {

std::string Report::str() const {
    std::ostringstream os;
    for (const auto& [k, v] : fields)
        os << k << ": " << v << "\n";
    return os.str();
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string digest_hex(std::string_view data) {
    std::uint64_t h = fnv1a64(data);
    static const char* hex = "0123456789abcdef";
    std::string out = "fnv1a:";
    for (int i = 15; i >= 0; --i)
        out += hex[(h >> (4 * i)) & 0xf];
    return out;
}

std::string render_combination(const std::vector<std::string>& names, const Vec& coords) {
    std::string out;
    for (size_t i = 0; i < coords.size(); ++i) {
        if (coords[i] == 0)
            continue;
        Rational c = coords[i];
        if (out.empty()) {
            if (c == -1)
                out += "-";
            else if (c != 1)
                out += to_string(c) + "*";
        } else {
            if (c < 0) {
                out += " - ";
                c = -c;
            } else {
                out += " + ";
            }
            if (c != 1)
                out += to_string(c) + "*";
        }
        out += names[i];
    }
    return out.empty() ? "0" : out;
}

std::string sym2_name(const ProductKernelData& pk, const GradedAlgebra& h, int sym2_id) {
    auto [i, j] = pk.sym2.elems[sym2_id];
    return "(" + h.names[i] + "." + h.names[j] + ")";
}

std::string g22_name(const ProductKernelData& pk, const GradedAlgebra& h, int g22_id) {
    auto [p, q] = pk.sym2sym2.elems[g22_id];
    return "(" + sym2_name(pk, h, p) + "." + sym2_name(pk, h, q) + ")";
}

std::string render_g22(const ProductKernelData& pk, const GradedAlgebra& h, const Vec& coords) {
    std::vector<std::string> names;
    for (int i = 0; i < pk.sym2sym2.size(); ++i)
        names.push_back(g22_name(pk, h, i));
    return render_combination(names, coords);
}

std::string render_sym2_vector(const ProductKernelData& pk, const GradedAlgebra& h, const Vec& coords) {
    std::vector<std::string> names;
    for (int i = 0; i < pk.sym2.size(); ++i)
        names.push_back(sym2_name(pk, h, i));
    return render_combination(names, coords);
}

std::string render_class(const GradedAlgebra& h, const Vec& coords) {
    return render_combination(h.names, coords);
}

std::string serialize_certificate(const GysinExtension& g, const AInfinityCertificate& cert,
                                  const std::string& base_digest, int sphere_dim, const std::string& euler_expr) {
    std::ostringstream os;
    os << "bmt-certificate: 1\n";
    os << "base-digest: " << base_digest << "\n";
    os << "sphere-dim: " << sphere_dim << "\n";
    os << "euler: " << euler_expr << "\n";
    os << "base-algebra:\n";
    std::istringstream alg(serialize_algebra(g.base));
    std::string line;
    while (std::getline(alg, line))
        os << "  " << line << "\n";
    os << "end-algebra\n";
    os << "f1:\n";
    for (int i = 0; i < g.cohom.dim(); ++i)
        os << "  " << g.cohom.names[i] << " = " << render_combination(g.chain.names, cert.f1[i]) << "\n";
    os << "end-f1\n";
    os << "f2:\n";
    for (const auto& [key, val] : cert.f2)
        os << "  " << g.cohom.names[key.first] << " , " << g.cohom.names[key.second] << " = "
           << render_combination(g.chain.names, val) << "\n";
    os << "end-f2\n";
    os << "residuals:\n";
    for (const auto& r : cert.residuals)
        os << "  p" << r.p << ": checked " << r.tuples << " nonzero " << r.nonzero << "\n";
    os << "end-residuals\n";
    return os.str();
}

ParsedCertificate parse_certificate(const std::string& text) {
    ParsedCertificate pc;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    enum class Sec { None, Algebra, F1, F2, Residuals } sec = Sec::None;
    bool header = false;
    auto trim = [](const std::string& s) {
        size_t a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos)
            return std::string();
        size_t b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (sec == Sec::Algebra) {
            if (line == "end-algebra") {
                sec = Sec::None;
            } else {
                pc.base_text += raw.size() > 2 && raw[0] == ' ' && raw[1] == ' ' ? raw.substr(2) : raw;
                pc.base_text += "\n";
            }
            continue;
        }
        if (line.empty() || line[0] == '#')
            continue;
        if (line.rfind("bmt-certificate:", 0) == 0) {
            header = true;
        } else if (line.rfind("base-digest:", 0) == 0) {
            pc.base_digest = trim(line.substr(12));
        } else if (line.rfind("sphere-dim:", 0) == 0) {
            pc.sphere_dim = std::stoi(trim(line.substr(11)));
        } else if (line.rfind("euler:", 0) == 0) {
            pc.euler_expr = trim(line.substr(6));
        } else if (line == "base-algebra:") {
            sec = Sec::Algebra;
        } else if (line == "f1:") {
            sec = Sec::F1;
        } else if (line == "f2:") {
            sec = Sec::F2;
        } else if (line == "residuals:") {
            sec = Sec::Residuals;
        } else if (line == "end-f1" || line == "end-f2" || line == "end-residuals") {
            sec = Sec::None;
        } else if (sec == Sec::F1 || sec == Sec::F2) {
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ParseError(lineno, "certificate table line without '='");
            std::string lhs = trim(line.substr(0, eq));
            std::string rhs = trim(line.substr(eq + 1));
            if (sec == Sec::F1)
                pc.f1_lines.emplace_back(lhs, rhs);
            else
                pc.f2_lines.emplace_back(lhs, rhs);
        } else if (sec == Sec::Residuals) {
            // informational; recomputed by the verifier
        } else {
            throw ParseError(lineno, "unexpected certificate line '" + line + "'");
        }
    }
    if (!header)
        throw ParseError(lineno, "not a certificate file");
    return pc;
}

}  // namespace bmt
