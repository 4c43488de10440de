#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wordmap {

struct Art2Params {
    int n = 0;             // F1 size (input length)
    double a = 10.0;       // fixed F1 weight
    double b = 10.0;       // fixed F1 weight
    double c = 0.1;        // reset weight
    double d = 0.9;        // F2 winner activity
    double e = 1e-4;       // division guard
    double theta = 0.0739221;  // noise-suppression threshold
    double alpha = 0.8;    // learning rate
    double rho = 0.999;    // vigilance
    int epochs = 1;
    int n_iter = 1;
    double back = 0.9;     // context feedback weight
    double cw = 0.0002;    // context influence on competition/reset
    double d_ctx = 0.9;    // context winner activity
    double alpha_ctx = 0.8;  // context learning rate

    // Recognition-time vigilance relaxation.
    double rho_step = 0.005;
    double rho_floor = 0.7;

    void validate() const;
    bool operator==(const Art2Params&) const = default;
};

// ART2 grouping network with recurrent context units. The UC vector holds a
// decaying, renormalized average of the noise-suppressed inputs; it biases the
// F2 competition and the reset test through the 2n-wide weight rows (pattern
// half + context half).
class Art2Network {
public:
    explicit Art2Network(Art2Params params);

    // Runs one stimulus through the full training pass: F1 update, UC update,
    // F2 competition with vigilance resets, and weight storage for the winner.
    // Returns (group id, created flag).
    std::pair<int, bool> train_pattern(std::span<const double> stimulus);

    // Search without weight storage; the context units do advance. Vigilance
    // starts at rho and relaxes by rho_step down to rho_floor until a group
    // resonates (the best-activation group is returned if none does).
    int recognize_pattern(std::span<const double> stimulus);

    // Current context representation (read-only copy of UC).
    std::vector<double> context_vector() const { return uc_; }

    int group_count() const { return static_cast<int>(top_down_.size()); }
    const Art2Params& params() const { return params_; }

    std::span<const double> uc() const { return uc_; }
    std::span<const double> pc() const { return pc_; }
    std::span<const double> top_down(int group) const;
    std::span<const double> bottom_up(int group) const;

    // Introspection for tests: F2 activations and search length of the last
    // train/recognize call.
    const std::vector<double>& last_f2_activations() const { return last_y_; }
    int last_search_steps() const { return last_search_steps_; }

    void save(std::ostream& out) const;
    std::string save_string() const;
    static Art2Network load(std::istream& in);
    static Art2Network load_string(const std::string& text);

    bool operator==(const Art2Network& other) const;

private:
    double suppress(double x) const { return x >= params_.theta ? x : 0.0; }
    void present(std::span<const double> stimulus);  // F1 front + UC/PC update
    std::vector<double> f2_activations() const;
    double candidate_r_norm(int group);  // sets p_, pc_ context half for group

    Art2Params params_;
    std::vector<double> u_, w_, p_, q_, x_, v_;  // F1 layer, length n
    std::vector<double> uc_;                     // context units, length n
    std::vector<double> pc_;                     // interface units, length 2n
    std::vector<std::vector<double>> top_down_;   // per group, length 2n
    std::vector<std::vector<double>> bottom_up_;  // per group, length 2n
    std::vector<double> last_y_;
    int last_search_steps_ = 0;
};

}  // namespace wordmap
