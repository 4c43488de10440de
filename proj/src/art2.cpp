#include "wordmap/art2.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "wordmap/errors.hpp"

namespace wordmap {

namespace {

double norm(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void expect_token(std::istream& in, const char* token) {
    std::string got;
    if (!(in >> got) || got != token)
        throw_data("art2 snapshot: expected token '" + std::string(token) + "', got '" +
                   got + "'");
}

double read_double(std::istream& in, const char* what) {
    double v = 0;
    if (!(in >> v)) throw_data(std::string("art2 snapshot: bad value for ") + what);
    return v;
}

long read_long(std::istream& in, const char* what) {
    long v = 0;
    if (!(in >> v)) throw_data(std::string("art2 snapshot: bad value for ") + what);
    return v;
}

}  // namespace

void Art2Params::validate() const {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (n < 1) throw_usage("art2 params: n must be >= 1");
    if (!(a >= 0.0) || !(b >= 0.0)) throw_usage("art2 params: a and b must be >= 0");
    if (!in01(c)) throw_usage("art2 params: c must be in [0,1]");
    if (!(d > 0.0 && d < 1.0)) throw_usage("art2 params: d must be in (0,1)");
    if (!(e > 0.0)) throw_usage("art2 params: e must be > 0");
    if (!(theta >= 0.0)) throw_usage("art2 params: theta must be >= 0");
    if (!in01(alpha)) throw_usage("art2 params: alpha must be in [0,1]");
    if (!(rho > 0.0 && rho <= 1.0)) throw_usage("art2 params: rho must be in (0,1]");
    if (epochs < 1) throw_usage("art2 params: epochs must be >= 1");
    if (n_iter < 1) throw_usage("art2 params: n_iter must be >= 1");
    if (!in01(back)) throw_usage("art2 params: back must be in [0,1]");
    if (!in01(cw)) throw_usage("art2 params: cw must be in [0,1]");
    if (!(d_ctx > 0.0 && d_ctx < 1.0)) throw_usage("art2 params: d_ctx must be in (0,1)");
    if (!in01(alpha_ctx)) throw_usage("art2 params: alpha_ctx must be in [0,1]");
    if (!(rho_step > 0.0)) throw_usage("art2 params: rho_step must be > 0");
    if (!in01(rho_floor)) throw_usage("art2 params: rho_floor must be in [0,1]");
}

Art2Network::Art2Network(Art2Params params) : params_(params) {
    params_.validate();
    const std::size_t n = static_cast<std::size_t>(params_.n);
    u_.assign(n, 0.0);
    w_.assign(n, 0.0);
    p_.assign(n, 0.0);
    q_.assign(n, 0.0);
    x_.assign(n, 0.0);
    v_.assign(n, 0.0);
    uc_.assign(n, 0.0);
    pc_.assign(2 * n, 0.0);
}

void Art2Network::present(std::span<const double> s) {
    const std::size_t n = static_cast<std::size_t>(params_.n);
    if (s.size() != n)
        throw_usage("art2: stimulus length " + std::to_string(s.size()) +
                    " does not match n = " + std::to_string(n));
    for (double x : s)
        if (!std::isfinite(x)) throw_data("art2: non-finite stimulus component");

    const double e = params_.e;
    // F1 initialization.
    std::fill(u_.begin(), u_.end(), 0.0);
    std::fill(p_.begin(), p_.end(), 0.0);
    std::fill(q_.begin(), q_.end(), 0.0);
    const double ns = norm(s);
    for (std::size_t i = 0; i < n; ++i) {
        w_[i] = s[i];
        x_[i] = s[i] / (e + ns);
        v_[i] = suppress(x_[i]);
    }
    // F1 update.
    const double nv = norm(v_);
    for (std::size_t i = 0; i < n; ++i) {
        u_[i] = v_[i] / (e + nv);
        w_[i] = s[i] + params_.a * u_[i];
        p_[i] = u_[i];
    }
    const double nw = norm(w_);
    const double np = norm(p_);
    for (std::size_t i = 0; i < n; ++i) {
        x_[i] = w_[i] / (e + nw);
        q_[i] = p_[i] / (e + np);
        v_[i] = suppress(x_[i]) + params_.b * suppress(q_[i]);
    }
    // Context units: decaying average of f(u), renormalized.
    for (std::size_t i = 0; i < n; ++i)
        uc_[i] = params_.back * uc_[i] + (1.0 - params_.back) * suppress(u_[i]);
    const double nuc = norm(uc_);
    for (std::size_t i = 0; i < n; ++i) uc_[i] = uc_[i] / (e + nuc);
    // Pattern half of the interface vector mirrors the context units.
    for (std::size_t i = 0; i < n; ++i) pc_[i] = uc_[i];
}

std::vector<double> Art2Network::f2_activations() const {
    const std::size_t n = static_cast<std::size_t>(params_.n);
    std::vector<double> y(top_down_.size(), 0.0);
    for (std::size_t j = 0; j < bottom_up_.size(); ++j) {
        double pattern = 0.0;
        double context = 0.0;
        const std::vector<double>& b = bottom_up_[j];
        for (std::size_t i = 0; i < n; ++i) {
            pattern += b[i] * p_[i];
            context += b[n + i] * pc_[i];
        }
        y[j] = (1.0 - params_.cw) * pattern + params_.cw * context;
    }
    return y;
}

double Art2Network::candidate_r_norm(int group) {
    const std::size_t n = static_cast<std::size_t>(params_.n);
    const double e = params_.e;
    const std::vector<double>& t = top_down_[static_cast<std::size_t>(group)];
    const double nv = norm(v_);
    for (std::size_t i = 0; i < n; ++i) {
        u_[i] = v_[i] / (e + nv);
        p_[i] = u_[i] + params_.d * t[i];
        pc_[n + i] = t[n + i];
    }
    const double nu = norm(u_);
    const double np = norm(p_);
    const double npc = norm(pc_);
    const double denom = e + nu + params_.c * np + params_.cw * npc;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (u_[i] + params_.c * p_[i] + params_.cw) / denom;
        acc += r * r;
    }
    return std::sqrt(acc);
}

std::pair<int, bool> Art2Network::train_pattern(std::span<const double> s) {
    const std::size_t n = static_cast<std::size_t>(params_.n);
    const double e = params_.e;
    present(s);

    std::vector<double> y = f2_activations();
    last_y_ = y;
    last_search_steps_ = 0;

    int winner = -1;
    bool created = false;
    bool reset = true;
    while (reset) {
        ++last_search_steps_;
        if (last_search_steps_ > group_count() + 1)
            throw_runtime("art2: search loop exceeded group_count + 1 iterations");
        // Highest-activation unit; -1 marks disabled units.
        int best = -1;
        double best_y = -1.0;
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (y[j] > best_y) {
                best_y = y[j];
                best = static_cast<int>(j);
            }
        }
        if (best == -1 || best_y == -1.0) {
            // Every committed unit is disabled (or none exists): commit an
            // unused unit. Its weight rows start at zero.
            winner = group_count();
            top_down_.emplace_back(2 * n, 0.0);
            bottom_up_.emplace_back(2 * n, 0.0);
            created = true;
            reset = false;
        } else {
            winner = best;
            const double rnorm = candidate_r_norm(winner);
            if (rnorm < params_.rho - e) {
                y[static_cast<std::size_t>(winner)] = -1.0;
                continue;
            }
            reset = false;
            for (std::size_t i = 0; i < n; ++i) w_[i] = s[i] + params_.a * u_[i];
            const double nw = norm(w_);
            const double np = norm(p_);
            for (std::size_t i = 0; i < n; ++i) {
                x_[i] = w_[i] / (e + nw);
                q_[i] = p_[i] / (e + np);
                v_[i] = suppress(x_[i]) + params_.b * suppress(q_[i]);
            }
        }
    }

    // Store the pattern and context on the winner and track F1.
    std::vector<double>& t = top_down_[static_cast<std::size_t>(winner)];
    std::vector<double>& bu = bottom_up_[static_cast<std::size_t>(winner)];
    const double fp = 1.0 + params_.alpha * params_.d * (params_.d - 1.0);
    const double fc = 1.0 + params_.alpha_ctx * params_.d_ctx * (params_.d_ctx - 1.0);
    for (int iter = 0; iter < params_.n_iter; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = params_.alpha * params_.d * u_[i] + fp * t[i];
            bu[i] = params_.alpha * params_.d * u_[i] + fp * bu[i];
            t[n + i] = params_.alpha_ctx * params_.d_ctx * uc_[i] + fc * t[n + i];
            bu[n + i] = params_.alpha_ctx * params_.d_ctx * uc_[i] + fc * bu[n + i];
        }
        const double nt = norm(t);
        if (nt > 0.0)
            for (double& x : t) x /= nt;
        const double nb = norm(bu);
        if (nb > 0.0)
            for (double& x : bu) x /= nb;
        const double nv = norm(v_);
        for (std::size_t i = 0; i < n; ++i) u_[i] = v_[i] / (e + nv);
        for (std::size_t i = 0; i < n; ++i) {
            w_[i] = s[i] + params_.a * u_[i];
            p_[i] = u_[i] + params_.d * t[i];
        }
        const double nw = norm(w_);
        const double np = norm(p_);
        for (std::size_t i = 0; i < n; ++i) {
            x_[i] = w_[i] / (e + nw);
            q_[i] = p_[i] / (e + np);
            v_[i] = suppress(x_[i]) + params_.b * suppress(q_[i]);
        }
    }
    return {winner, created};
}

int Art2Network::recognize_pattern(std::span<const double> s) {
    if (group_count() == 0) throw_usage("art2: recognize_pattern with no committed groups");
    present(s);
    const std::vector<double> y0 = f2_activations();
    last_y_ = y0;
    last_search_steps_ = 0;

    double rho = params_.rho;
    while (true) {
        std::vector<double> y = y0;
        for (int step = 0; step < group_count(); ++step) {
            ++last_search_steps_;
            int best = -1;
            double best_y = -1.0;
            for (std::size_t j = 0; j < y.size(); ++j) {
                if (y[j] > best_y) {
                    best_y = y[j];
                    best = static_cast<int>(j);
                }
            }
            if (best == -1 || best_y == -1.0) break;
            if (candidate_r_norm(best) >= rho - params_.e) return best;
            y[static_cast<std::size_t>(best)] = -1.0;
        }
        if (rho <= params_.rho_floor) break;
        rho = std::max(params_.rho_floor, rho - params_.rho_step);
    }
    // Nothing resonated even at the floor: fall back to the strongest group.
    int best = 0;
    for (std::size_t j = 1; j < y0.size(); ++j)
        if (y0[j] > y0[best]) best = static_cast<int>(j);
    return best;
}

std::span<const double> Art2Network::top_down(int group) const {
    if (group < 0 || group >= group_count()) throw_usage("art2: bad group id");
    return top_down_[static_cast<std::size_t>(group)];
}

std::span<const double> Art2Network::bottom_up(int group) const {
    if (group < 0 || group >= group_count()) throw_usage("art2: bad group id");
    return bottom_up_[static_cast<std::size_t>(group)];
}

void Art2Network::save(std::ostream& out) const {
    out << "wordmap-art2 1\n";
    out << "n " << params_.n << '\n';
    out << "params"
        << " a " << fmt17(params_.a) << " b " << fmt17(params_.b) << " c "
        << fmt17(params_.c) << " d " << fmt17(params_.d) << " e " << fmt17(params_.e)
        << " theta " << fmt17(params_.theta) << " alpha " << fmt17(params_.alpha)
        << " rho " << fmt17(params_.rho) << " epochs " << params_.epochs << " n_iter "
        << params_.n_iter << " back " << fmt17(params_.back) << " cw "
        << fmt17(params_.cw) << " d_ctx " << fmt17(params_.d_ctx) << " alpha_ctx "
        << fmt17(params_.alpha_ctx) << " rho_step " << fmt17(params_.rho_step)
        << " rho_floor " << fmt17(params_.rho_floor) << '\n';
    out << "groups " << group_count() << '\n';
    out << "uc";
    for (double x : uc_) out << ' ' << fmt17(x);
    out << '\n';
    for (int g = 0; g < group_count(); ++g) {
        out << "t " << g;
        for (double x : top_down_[static_cast<std::size_t>(g)]) out << ' ' << fmt17(x);
        out << '\n';
        out << "b " << g;
        for (double x : bottom_up_[static_cast<std::size_t>(g)]) out << ' ' << fmt17(x);
        out << '\n';
    }
}

std::string Art2Network::save_string() const {
    std::ostringstream out;
    save(out);
    return out.str();
}

Art2Network Art2Network::load(std::istream& in) {
    expect_token(in, "wordmap-art2");
    if (read_long(in, "version") != 1) throw_data("art2 snapshot: unsupported version");
    Art2Params p;
    expect_token(in, "n");
    p.n = static_cast<int>(read_long(in, "n"));
    expect_token(in, "params");
    expect_token(in, "a");
    p.a = read_double(in, "a");
    expect_token(in, "b");
    p.b = read_double(in, "b");
    expect_token(in, "c");
    p.c = read_double(in, "c");
    expect_token(in, "d");
    p.d = read_double(in, "d");
    expect_token(in, "e");
    p.e = read_double(in, "e");
    expect_token(in, "theta");
    p.theta = read_double(in, "theta");
    expect_token(in, "alpha");
    p.alpha = read_double(in, "alpha");
    expect_token(in, "rho");
    p.rho = read_double(in, "rho");
    expect_token(in, "epochs");
    p.epochs = static_cast<int>(read_long(in, "epochs"));
    expect_token(in, "n_iter");
    p.n_iter = static_cast<int>(read_long(in, "n_iter"));
    expect_token(in, "back");
    p.back = read_double(in, "back");
    expect_token(in, "cw");
    p.cw = read_double(in, "cw");
    expect_token(in, "d_ctx");
    p.d_ctx = read_double(in, "d_ctx");
    expect_token(in, "alpha_ctx");
    p.alpha_ctx = read_double(in, "alpha_ctx");
    expect_token(in, "rho_step");
    p.rho_step = read_double(in, "rho_step");
    expect_token(in, "rho_floor");
    p.rho_floor = read_double(in, "rho_floor");

    expect_token(in, "groups");
    const long groups = read_long(in, "groups");

    Art2Network net(p);
    expect_token(in, "uc");
    for (double& x : net.uc_) x = read_double(in, "uc");
    for (std::size_t i = 0; i < net.uc_.size(); ++i) net.pc_[i] = net.uc_[i];
    for (long g = 0; g < groups; ++g) {
        expect_token(in, "t");
        read_long(in, "group id");
        std::vector<double> t(2 * static_cast<std::size_t>(p.n));
        for (double& x : t) x = read_double(in, "t row");
        expect_token(in, "b");
        read_long(in, "group id");
        std::vector<double> b(2 * static_cast<std::size_t>(p.n));
        for (double& x : b) x = read_double(in, "b row");
        net.top_down_.push_back(std::move(t));
        net.bottom_up_.push_back(std::move(b));
    }
    return net;
}

Art2Network Art2Network::load_string(const std::string& text) {
    std::istringstream in(text);
    return load(in);
}

bool Art2Network::operator==(const Art2Network& other) const {
    return params_ == other.params_ && uc_ == other.uc_ &&
           top_down_ == other.top_down_ && bottom_up_ == other.bottom_up_;
}

}  // namespace wordmap
