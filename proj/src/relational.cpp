#include "setout/relational.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "setout/complement.hpp"
#include "setout/io.hpp"

namespace setout {

std::optional<JoinTree> build_join_tree(const RelationalDatabase& db) {
    const int g = db.num_relations();
    JoinTree tree;
    tree.parent.assign(static_cast<std::size_t>(g), -1);
    if (g == 0) return std::nullopt;
    std::vector<char> alive(static_cast<std::size_t>(g), 1);
    std::vector<std::vector<char>> has(static_cast<std::size_t>(g),
                                       std::vector<char>(static_cast<std::size_t>(db.num_attrs()), 0));
    for (int i = 0; i < g; ++i)
        for (int a : db.relations[static_cast<std::size_t>(i)].attrs)
            has[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] = 1;

    int remaining = g;
    while (remaining > 1) {
        int ear = -1, witness = -1;
        for (int i = 0; i < g && ear < 0; ++i) {
            if (!alive[static_cast<std::size_t>(i)]) continue;
            // attributes of i shared with any other alive relation
            std::vector<int> shared;
            for (int a : db.relations[static_cast<std::size_t>(i)].attrs) {
                bool elsewhere = false;
                for (int j = 0; j < g && !elsewhere; ++j)
                    if (j != i && alive[static_cast<std::size_t>(j)])
                        elsewhere = has[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)];
                if (elsewhere) shared.push_back(a);
            }
            for (int j = 0; j < g; ++j) {
                if (j == i || !alive[static_cast<std::size_t>(j)]) continue;
                bool ok = true;
                for (int a : shared) ok = ok && has[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)];
                if (ok) {
                    ear = i;
                    witness = j;
                    break;
                }
            }
        }
        if (ear < 0) return std::nullopt;  // no ear: cyclic
        tree.parent[static_cast<std::size_t>(ear)] = witness;
        tree.order.push_back(ear);
        alive[static_cast<std::size_t>(ear)] = 0;
        --remaining;
    }
    for (int i = 0; i < g; ++i)
        if (alive[static_cast<std::size_t>(i)]) tree.root = i;
    tree.order.push_back(tree.root);
    return tree;
}

std::string join_tree_dot(const RelationalDatabase& db, const JoinTree& tree) {
    std::ostringstream out;
    out << "graph jointree {\n";
    for (int i = 0; i < db.num_relations(); ++i) {
        out << "  " << db.relations[static_cast<std::size_t>(i)].name << " [label=\""
            << db.relations[static_cast<std::size_t>(i)].name << "(";
        const auto& attrs = db.relations[static_cast<std::size_t>(i)].attrs;
        for (std::size_t a = 0; a < attrs.size(); ++a)
            out << (a ? "," : "") << db.attr_names[static_cast<std::size_t>(attrs[a])];
        out << ")\"];\n";
    }
    for (int i = 0; i < db.num_relations(); ++i)
        if (tree.parent[static_cast<std::size_t>(i)] >= 0)
            out << "  " << db.relations[static_cast<std::size_t>(i)].name << " -- "
                << db.relations[static_cast<std::size_t>(tree.parent[static_cast<std::size_t>(i)])].name << ";\n";
    out << "}\n";
    return out.str();
}

RelationalDatabase load_relational(const std::string& schema_json_path) {
    std::ifstream in(schema_json_path);
    if (!in) throw ParseError("cannot open schema: " + schema_json_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed schema JSON: ") + e.what());
    }
    const std::string dir = schema_json_path.find('/') == std::string::npos
                                ? std::string(".")
                                : schema_json_path.substr(0, schema_json_path.rfind('/'));
    RelationalDatabase db;
    std::map<std::string, int> attr_id;
    for (const auto& jr : j.at("relations")) {
        Relation rel;
        rel.name = jr.at("name").get<std::string>();
        for (const auto& a : jr.at("attrs")) {
            const std::string name = a.get<std::string>();
            auto it = attr_id.find(name);
            if (it == attr_id.end()) {
                it = attr_id.emplace(name, static_cast<int>(db.attr_names.size())).first;
                db.attr_names.push_back(name);
            }
            rel.attrs.push_back(it->second);
        }
        const std::string csv_path = dir + "/" + jr.at("csv").get<std::string>();
        std::ifstream csv(csv_path);
        if (!csv) throw ParseError("cannot open csv: " + csv_path);
        std::string line;
        if (!std::getline(csv, line)) throw ParseError("empty csv: " + csv_path);
        while (std::getline(csv, line)) {
            if (line.empty()) continue;
            std::vector<double> tuple;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) tuple.push_back(std::stod(cell));
            if (tuple.size() != rel.attrs.size())
                throw ParseError("csv row arity mismatch in " + csv_path + ": " + line);
            rel.tuples.push_back(std::move(tuple));
        }
        auto sorted = rel.tuples;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ParseError("duplicate tuple in relation " + rel.name);
        db.relations.push_back(std::move(rel));
    }
    return db;
}

JoinEvaluator::JoinEvaluator(const RelationalDatabase& db, const JoinTree& tree)
    : JoinEvaluator(db, tree, Box::whole(db.num_attrs()), nullptr) {}

JoinEvaluator::JoinEvaluator(const RelationalDatabase& db, const JoinTree& tree, const Box& box,
                             const std::vector<std::vector<char>>* tuple_mask)
    : db_(&db), tree_(&tree) {
    const int g = db.num_relations();
    keep_.resize(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i) {
        const auto& rel = db.relations[static_cast<std::size_t>(i)];
        keep_[static_cast<std::size_t>(i)].assign(rel.tuples.size(), 1);
        for (std::size_t t = 0; t < rel.tuples.size(); ++t) {
            if (tuple_mask && !(*tuple_mask)[static_cast<std::size_t>(i)][t]) {
                keep_[static_cast<std::size_t>(i)][t] = 0;
                continue;
            }
            for (std::size_t c = 0; c < rel.attrs.size(); ++c)
                if (!box.iv[static_cast<std::size_t>(rel.attrs[c])].contains(rel.tuples[t][c])) {
                    keep_[static_cast<std::size_t>(i)][t] = 0;
                    break;
                }
        }
    }
    children_.assign(static_cast<std::size_t>(g), {});
    for (int i = 0; i < g; ++i)
        if (tree.parent[static_cast<std::size_t>(i)] >= 0)
            children_[static_cast<std::size_t>(tree.parent[static_cast<std::size_t>(i)])].push_back(i);
    edges_.resize(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i) {
        const int par = tree.parent[static_cast<std::size_t>(i)];
        if (par < 0) continue;
        const auto& ca = db.relations[static_cast<std::size_t>(i)].attrs;
        const auto& pa = db.relations[static_cast<std::size_t>(par)].attrs;
        for (std::size_t cc = 0; cc < ca.size(); ++cc)
            for (std::size_t pc = 0; pc < pa.size(); ++pc)
                if (ca[cc] == pa[pc]) {
                    edges_[static_cast<std::size_t>(i)].shared_child_cols.push_back(static_cast<int>(cc));
                    edges_[static_cast<std::size_t>(i)].shared_parent_cols.push_back(static_cast<int>(pc));
                }
    }
    reduce_and_count();
}

namespace {

std::vector<double> project(const std::vector<double>& tuple, const std::vector<int>& cols) {
    std::vector<double> out;
    out.reserve(cols.size());
    for (int c : cols) out.push_back(tuple[static_cast<std::size_t>(c)]);
    return out;
}

}  // namespace

void JoinEvaluator::reduce_and_count() {
    const int g = db_->num_relations();
    by_key_.assign(static_cast<std::size_t>(g), {});

    // bottom-up semi-join: drop parent tuples with an unmatched child
    for (int rel : tree_->order) {
        for (int c : children_[static_cast<std::size_t>(rel)]) {
            std::map<std::vector<double>, char> child_keys;
            const auto& crel = db_->relations[static_cast<std::size_t>(c)];
            for (std::size_t t = 0; t < crel.tuples.size(); ++t)
                if (keep_[static_cast<std::size_t>(c)][t])
                    child_keys[project(crel.tuples[t], edges_[static_cast<std::size_t>(c)].shared_child_cols)] = 1;
            const auto& prel = db_->relations[static_cast<std::size_t>(rel)];
            for (std::size_t t = 0; t < prel.tuples.size(); ++t) {
                if (!keep_[static_cast<std::size_t>(rel)][t]) continue;
                if (!child_keys.count(project(prel.tuples[t], edges_[static_cast<std::size_t>(c)].shared_parent_cols)))
                    keep_[static_cast<std::size_t>(rel)][t] = 0;
            }
        }
    }
    // top-down semi-join: drop child tuples with no surviving parent
    for (auto it = tree_->order.rbegin(); it != tree_->order.rend(); ++it) {
        const int rel = *it;
        const int par = tree_->parent[static_cast<std::size_t>(rel)];
        if (par < 0) continue;
        std::map<std::vector<double>, char> parent_keys;
        const auto& prel = db_->relations[static_cast<std::size_t>(par)];
        for (std::size_t t = 0; t < prel.tuples.size(); ++t)
            if (keep_[static_cast<std::size_t>(par)][t])
                parent_keys[project(prel.tuples[t], edges_[static_cast<std::size_t>(rel)].shared_parent_cols)] = 1;
        const auto& crel = db_->relations[static_cast<std::size_t>(rel)];
        for (std::size_t t = 0; t < crel.tuples.size(); ++t) {
            if (!keep_[static_cast<std::size_t>(rel)][t]) continue;
            if (!parent_keys.count(project(crel.tuples[t], edges_[static_cast<std::size_t>(rel)].shared_child_cols)))
                keep_[static_cast<std::size_t>(rel)][t] = 0;
        }
    }

    // key index of surviving tuples (children keyed by shared-with-parent cols)
    for (int i = 0; i < g; ++i) {
        const auto& rel = db_->relations[static_cast<std::size_t>(i)];
        for (std::size_t t = 0; t < rel.tuples.size(); ++t)
            if (keep_[static_cast<std::size_t>(i)][t])
                by_key_[static_cast<std::size_t>(i)]
                       [project(rel.tuples[t], edges_[static_cast<std::size_t>(i)].shared_child_cols)]
                           .push_back(static_cast<int>(t));
    }

    // subtree counts
    cnt_.resize(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i)
        cnt_[static_cast<std::size_t>(i)].assign(db_->relations[static_cast<std::size_t>(i)].tuples.size(), 0);
    for (int rel : tree_->order) {
        const auto& rtuples = db_->relations[static_cast<std::size_t>(rel)].tuples;
        for (std::size_t t = 0; t < rtuples.size(); ++t) {
            if (!keep_[static_cast<std::size_t>(rel)][t]) continue;
            long long prod = 1;
            for (int c : children_[static_cast<std::size_t>(rel)]) {
                const auto key = project(rtuples[t], edges_[static_cast<std::size_t>(c)].shared_parent_cols);
                long long sum = 0;
                auto it = by_key_[static_cast<std::size_t>(c)].find(key);
                if (it != by_key_[static_cast<std::size_t>(c)].end())
                    for (int crow : it->second) sum += cnt_[static_cast<std::size_t>(c)][static_cast<std::size_t>(crow)];
                prod *= sum;
                if (prod == 0) break;
            }
            cnt_[static_cast<std::size_t>(rel)][t] = prod;
        }
    }
    total_ = 0;
    const int root = tree_->root;
    for (std::size_t t = 0; t < db_->relations[static_cast<std::size_t>(root)].tuples.size(); ++t)
        if (keep_[static_cast<std::size_t>(root)][t]) total_ += cnt_[static_cast<std::size_t>(root)][t];
}

void JoinEvaluator::enumerate(const std::function<bool(const Point&)>& fn) const {
    if (total_ == 0) return;
    Point buf(static_cast<std::size_t>(db_->num_attrs()), 0.0);
    bool alive = true;

    std::function<void(int, int, const std::function<void()>&)> fill =
        [&](int rel, int row, const std::function<void()>& cont) {
            if (!alive) return;
            const auto& r = db_->relations[static_cast<std::size_t>(rel)];
            for (std::size_t c = 0; c < r.attrs.size(); ++c)
                buf[static_cast<std::size_t>(r.attrs[c])] = r.tuples[static_cast<std::size_t>(row)][c];
            std::function<void(std::size_t)> prod = [&](std::size_t ci) {
                if (!alive) return;
                if (ci == children_[static_cast<std::size_t>(rel)].size()) {
                    cont();
                    return;
                }
                const int c = children_[static_cast<std::size_t>(rel)][ci];
                const auto key = project(r.tuples[static_cast<std::size_t>(row)],
                                         edges_[static_cast<std::size_t>(c)].shared_parent_cols);
                auto it = by_key_[static_cast<std::size_t>(c)].find(key);
                if (it == by_key_[static_cast<std::size_t>(c)].end()) return;
                for (int crow : it->second) {
                    if (cnt_[static_cast<std::size_t>(c)][static_cast<std::size_t>(crow)] == 0) continue;
                    fill(c, crow, [&] { prod(ci + 1); });
                    if (!alive) return;
                }
            };
            prod(0);
        };

    const int root = tree_->root;
    for (std::size_t t = 0; t < db_->relations[static_cast<std::size_t>(root)].tuples.size() && alive; ++t) {
        if (!keep_[static_cast<std::size_t>(root)][t] || cnt_[static_cast<std::size_t>(root)][t] == 0) continue;
        fill(root, static_cast<int>(t), [&] {
            if (!fn(buf)) alive = false;
        });
    }
}

std::vector<Point> JoinEvaluator::materialize(long long cap) const {
    if (total_ > cap)
        throw MaterializeRefused("materialize refused: |Q| = " + std::to_string(total_) + " exceeds cap " +
                                 std::to_string(cap));
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(total_));
    enumerate([&](const Point& p) {
        out.push_back(p);
        return true;
    });
    return out;
}

Point JoinEvaluator::sample(SplitRng& rng) const {
    assert(total_ > 0);
    Point buf(static_cast<std::size_t>(db_->num_attrs()), 0.0);
    long long pickv = rng.below64(total_);
    const int root = tree_->root;
    int row = -1;
    for (std::size_t t = 0; t < db_->relations[static_cast<std::size_t>(root)].tuples.size(); ++t) {
        if (!keep_[static_cast<std::size_t>(root)][t]) continue;
        if (pickv < cnt_[static_cast<std::size_t>(root)][t]) {
            row = static_cast<int>(t);
            break;
        }
        pickv -= cnt_[static_cast<std::size_t>(root)][t];
    }
    std::function<void(int, int)> descend = [&](int rel, int r) {
        const auto& rr = db_->relations[static_cast<std::size_t>(rel)];
        for (std::size_t c = 0; c < rr.attrs.size(); ++c)
            buf[static_cast<std::size_t>(rr.attrs[c])] = rr.tuples[static_cast<std::size_t>(r)][c];
        for (int c : children_[static_cast<std::size_t>(rel)]) {
            const auto key = project(rr.tuples[static_cast<std::size_t>(r)],
                                     edges_[static_cast<std::size_t>(c)].shared_parent_cols);
            const auto& rows = by_key_[static_cast<std::size_t>(c)].at(key);
            long long sum = 0;
            for (int crow : rows) sum += cnt_[static_cast<std::size_t>(c)][static_cast<std::size_t>(crow)];
            long long pick = rng.below64(sum);
            int chosen = -1;
            for (int crow : rows) {
                if (pick < cnt_[static_cast<std::size_t>(c)][static_cast<std::size_t>(crow)]) {
                    chosen = crow;
                    break;
                }
                pick -= cnt_[static_cast<std::size_t>(c)][static_cast<std::size_t>(crow)];
            }
            descend(c, chosen);
        }
    };
    descend(root, row);
    return buf;
}

std::vector<double> JoinEvaluator::attribute_values(int attr) const {
    std::vector<double> vals;
    for (int i = 0; i < db_->num_relations(); ++i) {
        const auto& rel = db_->relations[static_cast<std::size_t>(i)];
        const auto it = std::find(rel.attrs.begin(), rel.attrs.end(), attr);
        if (it == rel.attrs.end()) continue;
        const auto col = static_cast<std::size_t>(it - rel.attrs.begin());
        for (std::size_t t = 0; t < rel.tuples.size(); ++t)
            if (keep_[static_cast<std::size_t>(i)][t]) vals.push_back(rel.tuples[t][col]);
        break;  // full reduction makes any owning relation's values exact
    }
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
}

long long count_rect(const RelationalDatabase& db, const JoinTree& tree, const Box& box) {
    return JoinEvaluator(db, tree, box).count();
}

std::vector<Point> sample_rect(const RelationalDatabase& db, const JoinTree& tree, const Box& box, int s,
                               SplitRng& rng) {
    JoinEvaluator ev(db, tree, box);
    std::vector<Point> out;
    if (ev.count() == 0) return out;  // explicit empty result
    out.reserve(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) out.push_back(ev.sample(rng));
    return out;
}

std::vector<double> linf_candidates(const RelationalDatabase& db, const JoinTree& tree) {
    JoinEvaluator ev(db, tree);
    std::vector<double> gaps{0.0};
    for (int a = 0; a < db.num_attrs(); ++a) {
        const auto vals = ev.attribute_values(a);
        for (std::size_t i = 0; i < vals.size(); ++i)
            for (std::size_t j = i + 1; j < vals.size(); ++j) gaps.push_back(vals[j] - vals[i]);
    }
    std::sort(gaps.begin(), gaps.end());
    gaps.erase(std::unique(gaps.begin(), gaps.end()), gaps.end());
    return gaps;
}

namespace {

// unordered pairs within L-infinity delta, one cube count per result
long long pairs_within(const RelationalDatabase& db, const JoinTree& tree, const JoinEvaluator& ev, double delta) {
    long long ordered = 0;
    ev.enumerate([&](const Point& q) {
        ordered += count_rect(db, tree, Box::cube(q, delta));
        return true;
    });
    return (ordered - ev.count()) / 2;
}

}  // namespace

double linf_kth_distance(const RelationalDatabase& db, const JoinTree& tree, long long ell) {
    JoinEvaluator ev(db, tree);
    const long long q = ev.count();
    if (q < 2) throw InstanceError("linf_kth_distance needs at least two join results");
    const long long pairs = q * (q - 1) / 2;
    if (ell < 1 || ell > pairs)
        throw InstanceError("linf_kth_distance: ell out of [1, " + std::to_string(pairs) + "]");
    const auto cands = linf_candidates(db, tree);
    int lo = 0, hi = static_cast<int>(cands.size()) - 1, best = hi;
    while (lo <= hi) {
        const int mid = (lo + hi) / 2;
        if (pairs_within(db, tree, ev, cands[static_cast<std::size_t>(mid)]) >= ell) {
            best = mid;
            hi = mid - 1;
        } else {
            lo = mid + 1;
        }
    }
    return cands[static_cast<std::size_t>(best)];
}

namespace {

std::optional<Point> first_result(const RelationalDatabase& db, const JoinTree& tree, const Box& box) {
    JoinEvaluator ev(db, tree, box);
    std::optional<Point> out;
    ev.enumerate([&](const Point& p) {
        out = p;
        return false;
    });
    return out;
}

// any join result strictly outside every cube of the cover, or nullopt
std::optional<Point> uncovered_result(const RelationalDatabase& db, const JoinTree& tree,
                                      const std::vector<Box>& cubes) {
    for (const Box& cell : cube_complement(cubes)) {
        auto hit = first_result(db, tree, cell);
        if (hit) return hit;
    }
    return std::nullopt;
}

}  // namespace

RelClusterResult rel_cluster(const RelationalDatabase& db, const JoinTree& tree, int k) {
    JoinEvaluator ev(db, tree);
    const long long q = ev.count();
    if (q == 0) throw InstanceError("rel_cluster: empty join");
    RelClusterResult res;
    if (q <= k) {
        res.centers = ev.materialize(q);
        return res;
    }
    const auto cands = linf_candidates(db, tree);

    auto greedy = [&](double r) -> std::optional<std::vector<Point>> {
        std::vector<Point> S;
        while (static_cast<int>(S.size()) < k) {
            std::optional<Point> next;
            if (S.empty()) {
                next = first_result(db, tree, Box::whole(db.num_attrs()));
            } else {
                std::vector<Box> cubes;
                for (const Point& s : S) cubes.push_back(Box::cube(s, 2.0 * r));
                next = uncovered_result(db, tree, cubes);
            }
            if (!next) return S;  // covered with fewer picks
            S.push_back(*next);
        }
        std::vector<Box> cubes;
        for (const Point& s : S) cubes.push_back(Box::cube(s, 2.0 * r));
        if (uncovered_result(db, tree, cubes)) return std::nullopt;
        return S;
    };

    int lo = 0, hi = static_cast<int>(cands.size()) - 1;
    std::vector<Point> best;
    while (lo <= hi) {
        const int mid = (lo + hi) / 2;
        auto S = greedy(cands[static_cast<std::size_t>(mid)]);
        if (S) {
            best = std::move(*S);
            hi = mid - 1;
        } else {
            lo = mid + 1;
        }
    }
    assert(!best.empty());

    // exact L-infinity coverage radius of the chosen centers
    auto covered = [&](double rho) {
        std::vector<Box> cubes;
        for (const Point& s : best) cubes.push_back(Box::cube(s, rho));
        return !uncovered_result(db, tree, cubes).has_value();
    };
    lo = 0;
    hi = static_cast<int>(cands.size()) - 1;
    double rho_inf = cands.back();
    while (lo <= hi) {
        const int mid = (lo + hi) / 2;
        if (covered(cands[static_cast<std::size_t>(mid)])) {
            rho_inf = cands[static_cast<std::size_t>(mid)];
            hi = mid - 1;
        } else {
            lo = mid + 1;
        }
    }
    res.centers = std::move(best);
    res.linf_cover = rho_inf;
    res.r_s = std::sqrt(static_cast<double>(db.num_attrs())) * rho_inf;
    return res;
}

}  // namespace setout
