#include "clockforge/protocol.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace clockforge {

namespace {

double cos_theta(double s) { return std::sqrt(std::max(0.0, 1.0 - s)); }
double sin_theta(double s) { return std::sqrt(std::max(0.0, s)); }

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ProtocolAngles make_protocol(int n_c, std::vector<double> s, bool pinned) {
    if (n_c < 1) throw std::invalid_argument("make_protocol: n_c must be >= 1");
    if (s.size() != static_cast<std::size_t>(n_c) + 1)
        throw std::invalid_argument("make_protocol: s must have n_c + 1 entries");
    for (double v : s)
        if (!(v >= 0.0) || !(v <= 1.0))
            throw std::invalid_argument("make_protocol: entries must lie in [0, 1]");
    if (pinned && (s.front() != 0.0 || s.back() != 1.0))
        throw std::invalid_argument("make_protocol: pinned protocols need s_0 = 0, s_{N_C} = 1");
    return ProtocolAngles{n_c, std::move(s), pinned};
}

ChoiBlocks choi_blocks(const ProtocolAngles& proto) {
    ChoiBlocks blocks;
    blocks.n_c = proto.n_c;
    blocks.diag_pairs.reserve(proto.s.size());
    for (double s : proto.s) blocks.diag_pairs.emplace_back(1.0 - s, s);
    blocks.off.reserve(static_cast<std::size_t>(proto.n_c));
    for (int w = 1; w <= proto.n_c; ++w)
        blocks.off.push_back(cos_theta(proto.s[static_cast<std::size_t>(w - 1)]) *
                             sin_theta(proto.s[static_cast<std::size_t>(w)]));
    return blocks;
}

OutputQubit output_state(const ProtocolAngles& proto, const PBand& band) {
    if (proto.n_c != band.n_c)
        throw std::invalid_argument("output_state: protocol and band sizes differ");
    OutputQubit out;
    double p11 = 0.0, comp1 = 0.0;
    for (int w = 0; w <= proto.n_c; ++w) {
        double term = band.diag[static_cast<std::size_t>(w)] * proto.s[static_cast<std::size_t>(w)];
        double y = term - comp1, t = p11 + y;
        comp1 = (t - p11) - y;
        p11 = t;
    }
    double x = 0.0, comp2 = 0.0;
    for (int w = 1; w <= proto.n_c; ++w) {
        double term = band.off[static_cast<std::size_t>(w - 1)] *
                      cos_theta(proto.s[static_cast<std::size_t>(w - 1)]) *
                      sin_theta(proto.s[static_cast<std::size_t>(w)]);
        double y = term - comp2, t = x + y;
        comp2 = (t - x) - y;
        x = t;
    }
    out.p11 = p11;
    out.p00 = 1.0 - p11;
    out.x = x;
    return out;
}

double infidelity(const ProtocolAngles& proto, const PBand& band, double theta_out) {
    if (proto.n_c != band.n_c)
        throw std::invalid_argument("infidelity: protocol and band sizes differ");
    // 1 - F = <perp| E(rho) |perp> regrouped as a sum of nonnegative per-w
    // terms; |perp> = sin(h)|0> - cos(h)|1> with h = theta_out / 2. The two
    // boundary leftovers vanish for pinned protocols but carry the endpoint
    // loss of relaxed ones (the flat measure-and-prepare family).
    const double sh = std::sin(theta_out / 2.0);
    const double ch = std::cos(theta_out / 2.0);
    double sum = proto.s.front() * band.diag.front() * ch * ch +
                 (1.0 - proto.s.back()) * band.diag.back() * sh * sh;
    double comp = 0.0;
    for (int w = 1; w <= proto.n_c; ++w) {
        double dprev = band.diag[static_cast<std::size_t>(w - 1)];
        double dcur = band.diag[static_cast<std::size_t>(w)];
        double off = band.off[static_cast<std::size_t>(w - 1)];
        double c = cos_theta(proto.s[static_cast<std::size_t>(w - 1)]);
        double sn = sin_theta(proto.s[static_cast<std::size_t>(w)]);
        double a = sh * std::sqrt(dprev) * c;
        double b = ch * std::sqrt(dcur) * sn;
        double term = (a - b) * (a - b) +
                      2.0 * sh * ch * c * sn * (std::sqrt(dprev * dcur) - off);
        double y = term - comp, t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double fidelity(const ProtocolAngles& proto, const PBand& band, double theta_out) {
    return 1.0 - infidelity(proto, band, theta_out);
}

bool is_ppt(const ProtocolAngles& proto) {
    for (std::size_t w = 1; w < proto.s.size(); ++w)
        if (proto.s[w] > proto.s[w - 1]) return false;
    return true;
}

double ti_covariance_residual(const ProtocolAngles& proto, double t, std::uint64_t seed) {
    const int n_c = proto.n_c;
    if (n_c > 12)
        throw std::invalid_argument("ti_covariance_residual: dense check capped at n_c = 12");
    using cd = std::complex<double>;
    const int dim = n_c + 1;

    // Random density matrix on the symmetric subspace: G G^dag / tr.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cd> g(static_cast<std::size_t>(dim) * dim);
    for (auto& v : g) v = cd(gauss(rng), gauss(rng));
    std::vector<cd> rho(static_cast<std::size_t>(dim) * dim, cd(0.0));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            cd acc(0.0);
            for (int k = 0; k < dim; ++k)
                acc += g[static_cast<std::size_t>(i) * dim + k] *
                       std::conj(g[static_cast<std::size_t>(j) * dim + k]);
            rho[static_cast<std::size_t>(i) * dim + j] = acc;
        }
    cd tr(0.0);
    for (int i = 0; i < dim; ++i) tr += rho[static_cast<std::size_t>(i) * dim + i];
    for (auto& v : rho) v /= tr;

    ChoiBlocks blocks = choi_blocks(proto);

    // Channel action from the block structure: the output 2x2 matrix has
    //   out00 = sum_w (1 - s_w) rho_ww, out11 = sum_w s_w rho_ww,
    //   out01 = sum_w A_w rho_{w-1,w}.
    auto apply = [&](const std::vector<cd>& m) {
        std::array<cd, 4> out{cd(0.0), cd(0.0), cd(0.0), cd(0.0)};
        for (int w = 0; w <= n_c; ++w) {
            cd d = m[static_cast<std::size_t>(w) * dim + w];
            out[0] += blocks.diag_pairs[static_cast<std::size_t>(w)].first * d;
            out[3] += blocks.diag_pairs[static_cast<std::size_t>(w)].second * d;
        }
        for (int w = 1; w <= n_c; ++w) {
            out[1] += blocks.off[static_cast<std::size_t>(w - 1)] *
                      m[static_cast<std::size_t>(w - 1) * dim + w];
            out[2] += blocks.off[static_cast<std::size_t>(w - 1)] *
                      m[static_cast<std::size_t>(w) * dim + (w - 1)];
        }
        return out;
    };

    // Evolve the input by exp(-i t H_in), H_in |w> = (N_C - 2w) |w>.
    std::vector<cd> evolved(rho.size());
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            double phase = -t * static_cast<double>((n_c - 2 * i) - (n_c - 2 * j));
            evolved[static_cast<std::size_t>(i) * dim + j] =
                std::polar(1.0, phase) * rho[static_cast<std::size_t>(i) * dim + j];
        }

    std::array<cd, 4> lhs = apply(evolved);
    std::array<cd, 4> rhs = apply(rho);
    // Conjugate the output by exp(-i t Z), Z = diag(+1, -1).
    rhs[1] *= std::polar(1.0, -2.0 * t);
    rhs[2] *= std::polar(1.0, 2.0 * t);

    double residual = 0.0;
    for (int k = 0; k < 4; ++k) residual = std::max(residual, std::abs(lhs[k] - rhs[k]));
    return residual;
}

std::vector<double> stinespring_rotations(const ProtocolAngles& proto) {
    std::vector<double> angles;
    angles.reserve(proto.s.size());
    for (double s : proto.s) angles.push_back(std::asin(sin_theta(s)));
    return angles;
}

std::string protocol_to_json(const ProtocolAngles& proto) {
    nlohmann::json j;
    j["n_c"] = proto.n_c;
    j["s"] = proto.s;
    return j.dump();
}

ProtocolAngles protocol_from_json(const std::string& text, bool pinned) {
    nlohmann::json j = nlohmann::json::parse(text);
    return make_protocol(j.at("n_c").get<int>(), j.at("s").get<std::vector<double>>(), pinned);
}

std::string protocol_to_csv(const ProtocolAngles& proto) {
    std::string out = "w,s_w\n";
    for (std::size_t w = 0; w < proto.s.size(); ++w) {
        out += std::to_string(w);
        out += ',';
        out += format17(proto.s[w]);
        out += '\n';
    }
    return out;
}

ProtocolAngles protocol_from_csv(const std::string& text, bool pinned) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("w,s_w", 0) != 0)
        throw std::invalid_argument("protocol_from_csv: missing 'w,s_w' header");
    std::vector<double> s;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("protocol_from_csv: malformed row");
        std::size_t w = std::stoul(line.substr(0, comma));
        if (w != s.size()) throw std::invalid_argument("protocol_from_csv: rows out of order");
        s.push_back(std::stod(line.substr(comma + 1)));
    }
    if (s.size() < 2) throw std::invalid_argument("protocol_from_csv: need at least two rows");
    int n_c = static_cast<int>(s.size()) - 1;
    return make_protocol(n_c, std::move(s), pinned);
}

}  // namespace clockforge
