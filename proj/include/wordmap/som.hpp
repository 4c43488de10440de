#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wordmap/rng.hpp"

namespace wordmap {

struct MapParams {
    double a_t = 0.999;     // activation threshold
    double lp = 0.0;        // lowest cluster percentage
    double beta = 0.1;      // relevance rate
    long maxcomp = 1;       // competitions between prune events
    double e_b = 0.1;       // winner learning rate
    double e_n = 0.0;       // neighbor learning rate
    double s = 1.0;         // relevance smoothness
    double conn_thr = 0.5;  // connection threshold
    long n_max = 0;         // node cap; <= 0 means unbounded
    double epsilon = 1e-8;

    void validate() const;
    bool operator==(const MapParams&) const = default;
};

// MapParams with maxcomp either absolute or expressed as a multiple of the
// training stream size, resolved when the stream length is known.
struct MapParamsSpec {
    double a_t = 0.999;
    double lp = 0.0;
    double beta = 0.1;
    double e_b = 0.1;
    double e_n_factor = 0.0;  // e_n = e_n_factor * e_b
    double s = 1.0;
    double conn_thr = 0.5;
    long n_max = 0;
    double epsilon = 1e-8;
    bool maxcomp_scaled = false;  // true: maxcomp = floor(maxcomp_value * S)
    double maxcomp_value = 1.0;

    MapParams resolve(std::size_t stream_size) const;
};

struct MapNode {
    int id = 0;
    std::vector<double> center;       // c_j
    std::vector<double> dist_moment;  // delta_j, moving average of |x - c|
    std::vector<double> relevance;    // omega_j in [0,1]
    double wins = 0.0;
    std::vector<int> neighbors;  // connected node ids, sorted
};

// sqrt(sum_i omega_i^2 (x_i - c_i)^2)
double weighted_distance(std::span<const double> x, const MapNode& node);

// 1 / (1 + D / (||omega||^2 + epsilon)), in (0, 1].
double activation(std::span<const double> x, const MapNode& node, double epsilon);

// Moves the center toward x, updates the distance moment with the pre-update
// center, and recomputes the relevance vector from the updated moment.
void update_node(MapNode& node, std::span<const double> x, double rate,
                 const MapParams& params);

// Cosine similarity between two relevance vectors (0 if either is zero).
double relevance_cosine(std::span<const double> a, std::span<const double> b);

struct StepEvent {
    enum class Kind { inserted, updated };
    Kind kind = Kind::updated;
    int node_id = -1;
    int pruned = 0;  // nodes removed by the prune sweep on this step
};

// Online subspace-clustering self-organizing map with a time-varying node set:
// a node is inserted at the input whenever the best activation falls below
// a_t, nodes learn per-dimension relevances, and rarely-winning nodes are
// removed every maxcomp competitions.
class SomMap {
public:
    SomMap(MapParams params, std::vector<double> initial_center, std::uint64_t seed);

    StepEvent organize_step(std::span<const double> x);

    // (node id, activation) of the most activated node; exact ties are broken
    // uniformly at random with the map's seeded generator.
    std::pair<int, double> find_winner(std::span<const double> x);

    // Deterministic variant for frozen-map queries (lowest id wins ties).
    std::pair<int, double> best_activation(std::span<const double> x) const;

    // All nodes with activation >= a_t, in descending activation order.
    std::vector<std::pair<int, double>> cluster_assign(std::span<const double> x) const;

    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return nodes_.size(); }
    const std::vector<MapNode>& nodes() const { return nodes_; }
    const MapNode* node(int id) const;
    const MapParams& params() const { return params_; }
    long nwins() const { return nwins_; }

    void save(std::ostream& out) const;
    std::string save_string() const;
    static SomMap load(std::istream& in);
    static SomMap load_string(const std::string& text);

    bool operator==(const SomMap& other) const;

private:
    void wire_new_node(std::size_t idx);
    void rebuild_connections();
    int prune();
    std::size_t winner_index(std::span<const double> x);

    MapParams params_;
    std::size_t dim_ = 0;
    std::vector<MapNode> nodes_;
    long nwins_ = 1;
    int next_id_ = 0;
    bool frozen_ = false;
    Rng rng_;
};

}  // namespace wordmap
