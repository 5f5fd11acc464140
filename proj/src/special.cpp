#include "mkdv/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "mkdv/interp.hpp"

namespace mkdv {

namespace {

using cplx = std::complex<double>;

// Lanczos g = 7, n = 9 approximation of Gamma, valid for Re z > 0.
constexpr double kLanczos[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
};

cplx lanczos_log_gamma(cplx z) {
    // caller guarantees Re z >= 1
    z -= 1.0;
    cplx x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    const cplx t = z + 7.5;
    return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// Frozen Ai/Ai' anchors at half-integer points of [-13, 13], from an
// arbitrary-precision evaluation.
struct AiryAnchor {
    double s, ai, aip;
};

constexpr AiryAnchor kAiryAnchors[] = {
    {-13.0, 0.1715104393705370446, -0.8715196778799533667},
    {-12.5, -0.2762745613811602482, -0.4193313304195051644},
    {-12.0, -0.06655517505437312947, 1.02311045336797073},
    {-11.5, 0.3054229700435926564, 0.08772415432178444305},
    {-11.0, -0.00875958925570238129, -1.027327873664579421},
    {-10.5, -0.3119260350510506009, 0.09095748739068167288},
    {-10.0, 0.04024123848644319069, 0.9962650441327900559},
    {-9.5, 0.3191032477191282014, -0.108095318811871239},
    {-9.0, -0.02213372154734140367, -0.9756639809263315947},
    {-8.5, -0.330290237630208879, -0.03231334828463913587},
    {-8.0, -0.05270505035638620262, 0.935560938198306551},
    {-7.5, 0.3217757163806478753, 0.3188095066985545962},
    {-7.0, 0.1842808352505056373, -0.7710081684101265477},
    {-6.5, -0.2380203019971158036, -0.674952492513202173},
    {-6.0, -0.3291451736298231052, 0.3459354872813428949},
    {-5.5, 0.0177815412765749756, 0.8641972177713983908},
    {-5.0, 0.3507610090241143198, 0.3271928185544431368},
    {-4.5, 0.2921527810559594669, -0.5233625323157477007},
    {-4.0, -0.0702655329492895151, -0.7906285753685813803},
    {-3.5, -0.3755338231404319119, -0.3434434334540481463},
    {-3.0, -0.3788142936776580743, 0.3145837692165988137},
    {-2.5, -0.1123250676929660892, 0.6788527342647943634},
    {-2.0, 0.227407428201685576, 0.6182590207416910414},
    {-1.5, 0.4642565777488694065, 0.3091869672024104204},
    {-1.0, 0.5355608832923521188, -0.0101605671166452094},
    {-0.5, 0.4757280916105395888, -0.2040816703395473861},
    {0.0, 0.3550280538878172393, -0.2588194037928067984},
    {0.5, 0.2316936064808334898, -0.2249105326646838931},
    {1.0, 0.1352924163128814155, -0.1591474412967932128},
    {1.5, 0.07174949700810540967, -0.09738201284230131922},
    {2.0, 0.03492413042327437914, -0.0530903844336536317},
    {2.5, 0.01572592338047049, -0.02625088103590323036},
    {3.0, 0.006591139357460719144, -0.01191297670595131847},
    {3.5, 0.002584098786989634963, -0.005004413967952582832},
    {4.0, 0.0009515638512048018736, -0.0019586409502041789},
    {4.5, 0.0003302503235143089837, -0.0007178665675575088887},
    {5.0, 0.0001083444281360744173, -0.000247413890868462476},
    {5.5, 0.00003368531190859981443, -0.00008046339130556514338},
    {6.0, 9.94769436025288957e-6, -0.00002476520039703495475},
    {6.5, 2.795882343204913585e-6, -7.23193146660179256e-6},
    {7.0, 7.492128863997167081e-7, -2.008150894738791991e-6},
    {7.5, 1.917256067513430752e-7, -5.312713959720544685e-7},
    {8.0, 4.692207616099231626e-8, -1.341439297906786574e-7},
    {8.5, 1.099700975519550651e-8, -3.237725440447602256e-8},
    {9.0, 2.471168430872489843e-9, -7.480641389658946413e-9},
    {9.5, 5.330263704617491627e-10, -1.656639459374066626e-9},
    {10.0, 1.104753255289868593e-10, -3.520633676738923637e-10},
    {10.5, 2.202274519283401644e-11, -7.187696781451567091e-11},
    {11.0, 4.226275864960359591e-12, -1.411144124662851734e-11},
    {11.5, 7.814290183962854346e-13, -2.666679967504531406e-12},
    {12.0, 1.393184688875360839e-13, -4.854736554985308463e-13},
    {12.5, 2.396827826078049936e-14, -8.521346564673856445e-14},
    {13.0, 3.981776078833335363e-15, -1.443208057397262604e-14},
};

constexpr int kNumAnchors = static_cast<int>(sizeof(kAiryAnchors) / sizeof(kAiryAnchors[0]));

// Taylor propagation of y'' = s y from the nearest anchor; |h| <= 0.25 keeps
// the 28-term series at machine accuracy.
void airy_from_anchor(double s, double* ai, double* aip) {
    int idx = static_cast<int>(std::lround((s + 13.0) / 0.5));
    idx = std::clamp(idx, 0, kNumAnchors - 1);
    const AiryAnchor& a = kAiryAnchors[idx];
    const double h = s - a.s;

    constexpr int kTerms = 28;
    double c[kTerms];
    c[0] = a.ai;
    c[1] = a.aip;
    c[2] = 0.5 * a.s * c[0];
    for (int k = 1; k + 2 < kTerms; ++k) {
        c[k + 2] = (a.s * c[k] + c[k - 1]) / static_cast<double>((k + 2) * (k + 1));
    }
    double y = 0.0, yp = 0.0;
    for (int k = kTerms - 1; k >= 1; --k) {
        y = y * h + c[k];
        yp = yp * h + static_cast<double>(k) * c[k];
    }
    y = y * h + c[0];
    if (ai) *ai = y;
    if (aip) *aip = yp;
}

// Asymptotic expansions beyond the anchored range.
void airy_asymptotic(double s, double* ai, double* aip) {
    constexpr int kTerms = 16;
    double u[kTerms], v[kTerms];
    u[0] = 1.0;
    v[0] = 1.0;
    for (int k = 1; k < kTerms; ++k) {
        const double kk = static_cast<double>(k);
        u[k] = u[k - 1] * (6.0 * kk - 5.0) * (6.0 * kk - 3.0) * (6.0 * kk - 1.0) /
               ((2.0 * kk - 1.0) * 216.0 * kk);
        v[k] = u[k] * (6.0 * kk + 1.0) / (1.0 - 6.0 * kk);
    }
    const double sqrt_pi = std::sqrt(M_PI);
    if (s > 0.0) {
        const double zeta = (2.0 / 3.0) * std::pow(s, 1.5);
        double su = 0.0, sv = 0.0, sign = 1.0, zp = 1.0;
        for (int k = 0; k < kTerms; ++k) {
            su += sign * u[k] / zp;
            sv += sign * v[k] / zp;
            zp *= zeta;
            sign = -sign;
        }
        const double pre = std::exp(-zeta) / (2.0 * sqrt_pi * std::pow(s, 0.25));
        if (ai) *ai = pre * su;
        if (aip) *aip = -std::pow(s, 0.25) * std::exp(-zeta) / (2.0 * sqrt_pi) * sv;
    } else {
        const double x = -s;
        const double zeta = (2.0 / 3.0) * std::pow(x, 1.5);
        double pc = 0.0, qc = 0.0, pd = 0.0, qd = 0.0;
        double zp = 1.0, sign = 1.0;
        for (int k = 0; 2 * k < kTerms; ++k) {
            pc += sign * u[2 * k] / zp;
            pd += sign * v[2 * k] / zp;
            const double zp1 = zp * zeta;
            if (2 * k + 1 < kTerms) {
                qc += sign * u[2 * k + 1] / zp1;
                qd += sign * v[2 * k + 1] / zp1;
            }
            zp = zp1 * zeta;
            sign = -sign;
        }
        const double w = zeta - 0.25 * M_PI;
        const double cw = std::cos(w), sw = std::sin(w);
        if (ai) *ai = (cw * pc + sw * qc) / (sqrt_pi * std::pow(x, 0.25));
        if (aip) *aip = std::pow(x, 0.25) / sqrt_pi * (sw * pd - cw * qd);
    }
}

void airy_eval(double s, double* ai, double* aip) {
    if (!std::isfinite(s)) throw InvalidArgument("airy: argument must be finite");
    if (std::abs(s) <= 13.0) {
        airy_from_anchor(s, ai, aip);
    } else {
        airy_asymptotic(s, ai, aip);
    }
}

struct PainleveState {
    double p, q;  // q = P'
};

inline PainleveState rhs(double s, const PainleveState& y) {
    return {y.q, s * y.p + 2.0 * y.p * y.p * y.p};
}

// Dormand-Prince 5(4) pair, one attempted step of size h (h < 0 here).
struct DpStep {
    PainleveState y5;
    double err;
};

DpStep dp45_step(double s, const PainleveState& y, double h) {
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                            a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

    auto axpy = [](const PainleveState& y0, double c, const PainleveState& k) {
        return PainleveState{y0.p + c * k.p, y0.q + c * k.q};
    };

    const PainleveState k1 = rhs(s, y);
    const PainleveState k2 = rhs(s + a21 * h, axpy(y, h * a21, k1));
    PainleveState t{y.p + h * (a31 * k1.p + a32 * k2.p), y.q + h * (a31 * k1.q + a32 * k2.q)};
    const PainleveState k3 = rhs(s + 0.3 * h, t);
    t = {y.p + h * (a41 * k1.p + a42 * k2.p + a43 * k3.p),
         y.q + h * (a41 * k1.q + a42 * k2.q + a43 * k3.q)};
    const PainleveState k4 = rhs(s + 0.8 * h, t);
    t = {y.p + h * (a51 * k1.p + a52 * k2.p + a53 * k3.p + a54 * k4.p),
         y.q + h * (a51 * k1.q + a52 * k2.q + a53 * k3.q + a54 * k4.q)};
    const PainleveState k5 = rhs(s + (8.0 / 9.0) * h, t);
    t = {y.p + h * (a61 * k1.p + a62 * k2.p + a63 * k3.p + a64 * k4.p + a65 * k5.p),
         y.q + h * (a61 * k1.q + a62 * k2.q + a63 * k3.q + a64 * k4.q + a65 * k5.q)};
    const PainleveState k6 = rhs(s + h, t);

    const PainleveState y5{y.p + h * (b1 * k1.p + b3 * k3.p + b4 * k4.p + b5 * k5.p + b6 * k6.p),
                           y.q + h * (b1 * k1.q + b3 * k3.q + b4 * k4.q + b5 * k5.q + b6 * k6.q)};
    const PainleveState k7 = rhs(s + h, y5);

    const double ep =
        h * (e1 * k1.p + e3 * k3.p + e4 * k4.p + e5 * k5.p + e6 * k6.p + e7 * k7.p);
    const double eq =
        h * (e1 * k1.q + e3 * k3.q + e4 * k4.q + e5 * k5.q + e6 * k6.q + e7 * k7.q);
    return {y5, std::max(std::abs(ep), std::abs(eq))};
}

} // namespace

std::complex<double> log_gamma_imag_axis(double kappa) {
    if (!(kappa > 0.0)) throw InvalidArgument("log_gamma_imag_axis: kappa must be positive");
    const cplx z(0.0, kappa);
    cplx lg = lanczos_log_gamma(z + 4.0);
    lg -= std::log(z) + std::log(z + 1.0) + std::log(z + 2.0) + std::log(z + 3.0);
    return lg;
}

double arg_gamma_i_kappa(double kappa) { return log_gamma_imag_axis(kappa).imag(); }

double airy_ai(double s) {
    double ai;
    airy_eval(s, &ai, nullptr);
    return ai;
}

double airy_ai_prime(double s) {
    double aip;
    airy_eval(s, nullptr, &aip);
    return aip;
}

PainleveSolution painleve2_solve(double rho, double s_min, double s_max, double ds,
                                 const PainleveOptions& opts) {
    if (!(std::abs(rho) < 1.0)) throw InvalidArgument("painleve2_solve: need |rho| < 1");
    if (!(s_max >= 8.0)) throw InvalidArgument("painleve2_solve: need s_max >= 8");
    if (!(s_min <= -10.0)) throw InvalidArgument("painleve2_solve: need s_min <= -10");
    if (!(ds > 0.0)) throw InvalidArgument("painleve2_solve: need ds > 0");

    const auto n_nodes = static_cast<std::size_t>(std::llround((s_max - s_min) / ds)) + 1;
    if (std::abs(s_min + ds * static_cast<double>(n_nodes - 1) - s_max) > 1e-9)
        throw InvalidArgument("painleve2_solve: window must be an integer multiple of ds");

    PainleveSolution sol;
    sol.rho = rho;
    sol.s_min = s_min;
    sol.s_max = s_max;
    sol.ds = ds;
    sol.s_grid.resize(n_nodes);
    sol.p.resize(n_nodes);
    sol.p_prime.resize(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) sol.s_grid[i] = s_min + ds * static_cast<double>(i);

    PainleveState y{rho * airy_ai(s_max), rho * airy_ai_prime(s_max)};
    sol.p.back() = y.p;
    sol.p_prime.back() = y.q;

    // march from s_max down, landing exactly on every grid node
    for (std::size_t j = n_nodes - 1; j > 0; --j) {
        const double s_to = sol.s_grid[j - 1];
        double s = sol.s_grid[j];
        double h = -(s - s_to);
        while (s > s_to) {
            if (-h > s - s_to) h = -(s - s_to);
            const DpStep step = dp45_step(s, y, h);
            const double scale =
                opts.atol + opts.rtol * std::max({std::abs(y.p), std::abs(y.q), 1.0});
            if (step.err <= scale) {
                s += h;
                y = step.y5;
                if (std::abs(y.p) > opts.blowup_guard)
                    throw BlowUp("painleve2_solve: |P| exceeded guard at s = " + std::to_string(s) +
                                 " (rho too close to 1 for this window)");
                const double grow = 0.9 * std::pow(scale / std::max(step.err, 1e-300), 0.2);
                h *= std::min(grow, 5.0);
            } else {
                h *= std::max(0.9 * std::pow(scale / step.err, 0.2), 0.2);
                if (-h < opts.min_step)
                    throw NonConvergence("painleve2_solve: step control stalled at s = " +
                                         std::to_string(s));
            }
        }
        sol.p[j - 1] = y.p;
        sol.p_prime[j - 1] = y.q;
    }
    return sol;
}

double painleve_eval(const PainleveSolution& sol, double s) {
    if (sol.size() == 0) throw InvalidArgument("painleve_eval: empty table");
    if (s < sol.s_min - 1e-12 || s > sol.s_max + 1e-12)
        throw OutOfRange("painleve_eval: s = " + std::to_string(s) + " outside [" +
                         std::to_string(sol.s_min) + ", " + std::to_string(sol.s_max) + "]");
    const double u = (s - sol.s_min) / sol.ds;
    const double k = std::round(u);
    if (std::abs(u - k) < 1e-9 && k >= 0.0 && k < static_cast<double>(sol.size()))
        return sol.p[static_cast<std::size_t>(k)];
    return cubic_interp_uniform<double>(sol.s_min, sol.ds, std::span<const double>(sol.p), s);
}

double painleve_residual_max(const PainleveSolution& sol, double s_lo, double s_hi) {
    const double ds = sol.ds;
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < sol.size(); ++i) {
        const double s = sol.s_grid[i];
        if (s < s_lo || s > s_hi) continue;
        const double second = (-sol.p[i - 2] + 16.0 * sol.p[i - 1] - 30.0 * sol.p[i] +
                               16.0 * sol.p[i + 1] - sol.p[i + 2]) /
                              (12.0 * ds * ds);
        const double res = second - s * sol.p[i] - 2.0 * sol.p[i] * sol.p[i] * sol.p[i];
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

} // namespace mkdv
