#include "wordmap/som.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "wordmap/errors.hpp"

namespace wordmap {

namespace {

void check_dim(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got)
        throw_usage(std::string(what) + ": dimension mismatch (expected " +
                    std::to_string(expected) + ", got " + std::to_string(got) + ")");
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_vector(std::ostream& out, const char* tag, std::span<const double> v) {
    out << tag;
    for (double x : v) out << ' ' << fmt17(x);
    out << '\n';
}

void expect_token(std::istream& in, const char* token) {
    std::string got;
    if (!(in >> got) || got != token)
        throw_data("som snapshot: expected token '" + std::string(token) + "', got '" +
                   got + "'");
}

double read_double(std::istream& in, const char* what) {
    double v = 0;
    if (!(in >> v)) throw_data(std::string("som snapshot: bad value for ") + what);
    return v;
}

long read_long(std::istream& in, const char* what) {
    long v = 0;
    if (!(in >> v)) throw_data(std::string("som snapshot: bad value for ") + what);
    return v;
}

}  // namespace

void MapParams::validate() const {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!(a_t > 0.0 && a_t < 1.0)) throw_usage("map params: a_t must be in (0,1)");
    if (!in01(lp)) throw_usage("map params: lp must be in [0,1]");
    if (!in01(beta)) throw_usage("map params: beta must be in [0,1]");
    if (maxcomp < 1) throw_usage("map params: maxcomp must be >= 1");
    if (!in01(e_b)) throw_usage("map params: e_b must be in [0,1]");
    if (!in01(e_n)) throw_usage("map params: e_n must be in [0,1]");
    if (!(s > 0.0)) throw_usage("map params: s must be > 0");
    if (!in01(conn_thr)) throw_usage("map params: conn_thr must be in [0,1]");
    if (!(epsilon > 0.0)) throw_usage("map params: epsilon must be > 0");
}

MapParams MapParamsSpec::resolve(std::size_t stream_size) const {
    MapParams p;
    p.a_t = a_t;
    p.lp = lp;
    p.beta = beta;
    p.e_b = e_b;
    p.e_n = e_n_factor * e_b;
    p.s = s;
    p.conn_thr = conn_thr;
    p.n_max = n_max;
    p.epsilon = epsilon;
    if (maxcomp_scaled) {
        p.maxcomp = std::max(1L, static_cast<long>(std::floor(
                                     maxcomp_value * static_cast<double>(stream_size))));
    } else {
        p.maxcomp = std::max(1L, std::lround(maxcomp_value));
    }
    p.validate();
    return p;
}

double weighted_distance(std::span<const double> x, const MapNode& node) {
    check_dim(node.center.size(), x.size(), "weighted_distance");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = node.relevance[i];
        const double d = x[i] - node.center[i];
        acc += w * w * d * d;
    }
    return std::sqrt(acc);
}

double activation(std::span<const double> x, const MapNode& node, double epsilon) {
    const double dist = weighted_distance(x, node);
    double norm2 = 0.0;
    for (double w : node.relevance) norm2 += w * w;
    return 1.0 / (1.0 + dist / (norm2 + epsilon));
}

void update_node(MapNode& node, std::span<const double> x, double rate,
                 const MapParams& params) {
    check_dim(node.center.size(), x.size(), "update_node");
    const std::size_t m = x.size();
    const double eb = rate * params.beta;
    // Distance moment first: it uses the pre-update center.
    for (std::size_t i = 0; i < m; ++i) {
        node.dist_moment[i] =
            (1.0 - eb) * node.dist_moment[i] + eb * std::fabs(x[i] - node.center[i]);
    }
    for (std::size_t i = 0; i < m; ++i)
        node.center[i] += rate * (x[i] - node.center[i]);

    double dmin = node.dist_moment[0];
    double dmax = node.dist_moment[0];
    double dsum = 0.0;
    for (double d : node.dist_moment) {
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
        dsum += d;
    }
    if (dmin == dmax) {
        std::fill(node.relevance.begin(), node.relevance.end(), 1.0);
        return;
    }
    const double dmean = dsum / static_cast<double>(m);
    const double scale = params.s * (dmax - dmin);
    for (std::size_t i = 0; i < m; ++i) {
        double z = (node.dist_moment[i] - dmean) / scale;
        z = std::clamp(z, -700.0, 700.0);
        node.relevance[i] = 1.0 / (1.0 + std::exp(z));
    }
}

double relevance_cosine(std::span<const double> a, std::span<const double> b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

SomMap::SomMap(MapParams params, std::vector<double> initial_center,
               std::uint64_t seed)
    : params_(params), dim_(initial_center.size()), rng_(seed) {
    params_.validate();
    if (initial_center.empty()) throw_usage("som map: empty initial center");
    MapNode first;
    first.id = next_id_++;
    first.center = std::move(initial_center);
    first.dist_moment.assign(dim_, 0.0);
    first.relevance.assign(dim_, 1.0);
    first.wins = 0.0;
    nodes_.push_back(std::move(first));
}

const MapNode* SomMap::node(int id) const {
    for (const MapNode& n : nodes_)
        if (n.id == id) return &n;
    return nullptr;
}

std::size_t SomMap::winner_index(std::span<const double> x) {
    double best = -1.0;
    std::vector<std::size_t> ties;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double a = activation(x, nodes_[i], params_.epsilon);
        if (a > best) {
            best = a;
            ties.clear();
            ties.push_back(i);
        } else if (a == best) {
            ties.push_back(i);
        }
    }
    if (ties.size() == 1) return ties[0];
    return ties[rng_.next_index(ties.size())];
}

std::pair<int, double> SomMap::find_winner(std::span<const double> x) {
    if (nodes_.empty()) throw_usage("find_winner on empty map");
    check_dim(dim_, x.size(), "find_winner");
    const std::size_t idx = winner_index(x);
    return {nodes_[idx].id, activation(x, nodes_[idx], params_.epsilon)};
}

std::pair<int, double> SomMap::best_activation(std::span<const double> x) const {
    if (nodes_.empty()) throw_usage("best_activation on empty map");
    check_dim(dim_, x.size(), "best_activation");
    std::size_t best_idx = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double a = activation(x, nodes_[i], params_.epsilon);
        if (a > best) {
            best = a;
            best_idx = i;
        }
    }
    return {nodes_[best_idx].id, best};
}

std::vector<std::pair<int, double>> SomMap::cluster_assign(
    std::span<const double> x) const {
    check_dim(dim_, x.size(), "cluster_assign");
    std::vector<std::pair<int, double>> acts;
    acts.reserve(nodes_.size());
    for (const MapNode& n : nodes_)
        acts.emplace_back(n.id, activation(x, n, params_.epsilon));
    std::sort(acts.begin(), acts.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::size_t keep = 0;
    while (keep < acts.size() && acts[keep].second >= params_.a_t) ++keep;
    acts.resize(keep);
    return acts;
}

void SomMap::wire_new_node(std::size_t idx) {
    MapNode& fresh = nodes_[idx];
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (i == idx) continue;
        if (relevance_cosine(fresh.relevance, nodes_[i].relevance) > params_.conn_thr) {
            fresh.neighbors.push_back(nodes_[i].id);
            nodes_[i].neighbors.push_back(fresh.id);
            std::sort(nodes_[i].neighbors.begin(), nodes_[i].neighbors.end());
        }
    }
    std::sort(fresh.neighbors.begin(), fresh.neighbors.end());
}

void SomMap::rebuild_connections() {
    for (MapNode& n : nodes_) n.neighbors.clear();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes_.size(); ++j) {
            if (relevance_cosine(nodes_[i].relevance, nodes_[j].relevance) >
                params_.conn_thr) {
                nodes_[i].neighbors.push_back(nodes_[j].id);
                nodes_[j].neighbors.push_back(nodes_[i].id);
            }
        }
    }
    for (MapNode& n : nodes_) std::sort(n.neighbors.begin(), n.neighbors.end());
}

int SomMap::prune() {
    const double threshold = params_.lp * static_cast<double>(params_.maxcomp);
    std::vector<MapNode> kept;
    kept.reserve(nodes_.size());
    for (MapNode& n : nodes_)
        if (n.wins >= threshold) kept.push_back(std::move(n));
    if (kept.empty()) {
        // The removal rule would empty the map; retain the strongest node.
        std::size_t best = 0;
        for (std::size_t i = 1; i < nodes_.size(); ++i)
            if (nodes_[i].wins > nodes_[best].wins) best = i;
        kept.push_back(std::move(nodes_[best]));
    }
    const int removed = static_cast<int>(nodes_.size() - kept.size());
    nodes_ = std::move(kept);
    rebuild_connections();
    for (MapNode& n : nodes_) n.wins = 0.0;
    return removed;
}

StepEvent SomMap::organize_step(std::span<const double> x) {
    if (frozen_) throw_usage("organize_step on a frozen map");
    if (nodes_.empty()) throw_usage("organize_step on empty map");
    check_dim(dim_, x.size(), "organize_step");

    StepEvent ev;
    const std::size_t widx = winner_index(x);
    const double act = activation(x, nodes_[widx], params_.epsilon);
    const bool can_insert =
        params_.n_max <= 0 || static_cast<long>(nodes_.size()) < params_.n_max;

    if (act < params_.a_t && can_insert) {
        MapNode fresh;
        fresh.id = next_id_++;
        fresh.center.assign(x.begin(), x.end());
        fresh.dist_moment.assign(dim_, 0.0);
        fresh.relevance.assign(dim_, 1.0);
        fresh.wins = params_.lp * static_cast<double>(nwins_);
        nodes_.push_back(std::move(fresh));
        wire_new_node(nodes_.size() - 1);
        ev.kind = StepEvent::Kind::inserted;
        ev.node_id = nodes_.back().id;
    } else {
        MapNode& winner = nodes_[widx];
        const std::vector<int> neighbor_ids = winner.neighbors;
        update_node(winner, x, params_.e_b, params_);
        for (int id : neighbor_ids) {
            for (MapNode& n : nodes_) {
                if (n.id == id) {
                    update_node(n, x, params_.e_n, params_);
                    break;
                }
            }
        }
        winner.wins += 1.0;
        ev.kind = StepEvent::Kind::updated;
        ev.node_id = winner.id;
    }

    if (nwins_ == params_.maxcomp) {
        ev.pruned = prune();
        nwins_ = 0;
    }
    ++nwins_;
    return ev;
}

void SomMap::save(std::ostream& out) const {
    out << "wordmap-som 1\n";
    out << "dim " << dim_ << '\n';
    out << "params"
        << " a_t " << fmt17(params_.a_t) << " lp " << fmt17(params_.lp) << " beta "
        << fmt17(params_.beta) << " maxcomp " << params_.maxcomp << " e_b "
        << fmt17(params_.e_b) << " e_n " << fmt17(params_.e_n) << " s "
        << fmt17(params_.s) << " conn_thr " << fmt17(params_.conn_thr) << " n_max "
        << params_.n_max << " epsilon " << fmt17(params_.epsilon) << '\n';
    out << "state nwins " << nwins_ << " next_id " << next_id_ << " frozen "
        << (frozen_ ? 1 : 0) << '\n';
    out << "rng";
    for (std::uint64_t w : rng_.state()) out << ' ' << w;
    out << '\n';
    out << "nodes " << nodes_.size() << '\n';
    for (const MapNode& n : nodes_) {
        out << "node " << n.id << " wins " << fmt17(n.wins) << '\n';
        write_vector(out, "center", n.center);
        write_vector(out, "moment", n.dist_moment);
        write_vector(out, "relevance", n.relevance);
        out << "neighbors " << n.neighbors.size();
        for (int id : n.neighbors) out << ' ' << id;
        out << '\n';
    }
}

std::string SomMap::save_string() const {
    std::ostringstream out;
    save(out);
    return out.str();
}

SomMap SomMap::load(std::istream& in) {
    expect_token(in, "wordmap-som");
    const long version = read_long(in, "version");
    if (version != 1) throw_data("som snapshot: unsupported version");
    expect_token(in, "dim");
    const long dim = read_long(in, "dim");
    if (dim < 1) throw_data("som snapshot: bad dimension");

    MapParams p;
    expect_token(in, "params");
    expect_token(in, "a_t");
    p.a_t = read_double(in, "a_t");
    expect_token(in, "lp");
    p.lp = read_double(in, "lp");
    expect_token(in, "beta");
    p.beta = read_double(in, "beta");
    expect_token(in, "maxcomp");
    p.maxcomp = read_long(in, "maxcomp");
    expect_token(in, "e_b");
    p.e_b = read_double(in, "e_b");
    expect_token(in, "e_n");
    p.e_n = read_double(in, "e_n");
    expect_token(in, "s");
    p.s = read_double(in, "s");
    expect_token(in, "conn_thr");
    p.conn_thr = read_double(in, "conn_thr");
    expect_token(in, "n_max");
    p.n_max = read_long(in, "n_max");
    expect_token(in, "epsilon");
    p.epsilon = read_double(in, "epsilon");

    expect_token(in, "state");
    expect_token(in, "nwins");
    const long nwins = read_long(in, "nwins");
    expect_token(in, "next_id");
    const long next_id = read_long(in, "next_id");
    expect_token(in, "frozen");
    const long frozen = read_long(in, "frozen");

    expect_token(in, "rng");
    std::array<std::uint64_t, 4> rng_state{};
    for (auto& w : rng_state) {
        if (!(in >> w)) throw_data("som snapshot: bad rng state");
    }

    expect_token(in, "nodes");
    const long count = read_long(in, "node count");
    if (count < 1) throw_data("som snapshot: node count must be >= 1");

    SomMap map(p, std::vector<double>(static_cast<std::size_t>(dim), 0.0), 0);
    map.nodes_.clear();
    map.nwins_ = nwins;
    map.next_id_ = static_cast<int>(next_id);
    map.frozen_ = frozen != 0;
    map.rng_.set_state(rng_state);

    auto read_vec = [&](const char* tag, std::vector<double>& v) {
        expect_token(in, tag);
        v.resize(static_cast<std::size_t>(dim));
        for (auto& x : v) x = read_double(in, tag);
    };
    for (long i = 0; i < count; ++i) {
        MapNode n;
        expect_token(in, "node");
        n.id = static_cast<int>(read_long(in, "node id"));
        expect_token(in, "wins");
        n.wins = read_double(in, "wins");
        read_vec("center", n.center);
        read_vec("moment", n.dist_moment);
        read_vec("relevance", n.relevance);
        expect_token(in, "neighbors");
        const long k = read_long(in, "neighbor count");
        n.neighbors.resize(static_cast<std::size_t>(k));
        for (auto& id : n.neighbors) id = static_cast<int>(read_long(in, "neighbor id"));
        map.nodes_.push_back(std::move(n));
    }
    return map;
}

SomMap SomMap::load_string(const std::string& text) {
    std::istringstream in(text);
    return load(in);
}

bool SomMap::operator==(const SomMap& other) const {
    if (!(params_ == other.params_)) return false;
    if (dim_ != other.dim_ || nwins_ != other.nwins_ || next_id_ != other.next_id_ ||
        frozen_ != other.frozen_ || !(rng_ == other.rng_) ||
        nodes_.size() != other.nodes_.size())
        return false;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const MapNode& a = nodes_[i];
        const MapNode& b = other.nodes_[i];
        if (a.id != b.id || a.wins != b.wins || a.center != b.center ||
            a.dist_moment != b.dist_moment || a.relevance != b.relevance ||
            a.neighbors != b.neighbors)
            return false;
    }
    return true;
}

}  // namespace wordmap
