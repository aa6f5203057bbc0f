#include "mgs/polytope.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "mgs/double_description.hpp"
#include "mgs/errors.hpp"

namespace mgs {

std::string to_string(Resource r) {
    switch (r) {
        case Resource::L: return "L";
        case Resource::Q: return "Q";
        case Resource::NS: return "NS";
        case Resource::T: return "T";
        case Resource::S: return "S";
    }
    return "?";
}

Resource parse_resource(std::string_view text) {
    if (text == "L") return Resource::L;
    if (text == "Q") return Resource::Q;
    if (text == "NS") return Resource::NS;
    if (text == "T") return Resource::T;
    if (text == "S") return Resource::S;
    throw std::invalid_argument("unknown resource: " + std::string(text));
}

Partition::Partition(std::vector<std::vector<int>> blocks) : blocks_(std::move(blocks)) {
    int n = 0;
    for (auto& b : blocks_) {
        if (b.empty()) throw std::invalid_argument("partition has an empty block");
        std::sort(b.begin(), b.end());
        n += static_cast<int>(b.size());
    }
    std::vector<bool> seen(n, false);
    for (const auto& b : blocks_)
        for (int p : b) {
            if (p < 0 || p >= n || seen[p])
                throw std::invalid_argument("partition blocks must be disjoint and cover 0..n-1");
            seen[p] = true;
        }
    std::sort(blocks_.begin(), blocks_.end());
    parties_ = n;
}

Partition Partition::parse(std::string_view text, int parties) {
    std::vector<std::vector<int>> blocks(1);
    std::string number;
    auto flush = [&] {
        if (number.empty()) throw std::invalid_argument("malformed partition: " + std::string(text));
        blocks.back().push_back(std::stoi(number));
        number.clear();
    };
    for (char c : text) {
        if (c == ' ') continue;
        if (c == ',') flush();
        else if (c == '|') {
            flush();
            blocks.emplace_back();
        } else if (c >= '0' && c <= '9') number += c;
        else throw std::invalid_argument("malformed partition: " + std::string(text));
    }
    flush();
    Partition p(std::move(blocks));
    if (p.parties() != parties)
        throw std::invalid_argument("partition covers " + std::to_string(p.parties()) + " parties, expected " +
                                    std::to_string(parties));
    return p;
}

Partition Partition::singletons(int parties) {
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < parties; ++i) blocks.push_back({i});
    return Partition(std::move(blocks));
}

int Partition::max_block() const {
    std::size_t m = 0;
    for (const auto& b : blocks_) m = std::max(m, b.size());
    return static_cast<int>(m);
}

std::string Partition::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (i) os << '|';
        for (std::size_t j = 0; j < blocks_[i].size(); ++j) os << (j ? "," : "") << blocks_[i][j];
    }
    return os.str();
}

std::vector<Partition> partitions(int n, int k) {
    if (n < 1 || k < 1 || k > n) throw std::invalid_argument("partitions: need 1 <= k <= n");
    std::vector<Partition> out;
    std::vector<int> rgs(n, 0);
    std::vector<int> sizes;
    std::function<void(int, int)> rec = [&](int i, int blocks) {
        if (i == n) {
            std::vector<std::vector<int>> b(blocks);
            for (int p = 0; p < n; ++p) b[rgs[p]].push_back(p);
            out.emplace_back(std::move(b));
            return;
        }
        for (int label = 0; label <= blocks && label < n; ++label) {
            if (label == blocks) sizes.push_back(0);
            if (sizes[label] < k) {
                rgs[i] = label;
                ++sizes[label];
                rec(i + 1, label == blocks ? blocks + 1 : blocks);
                --sizes[label];
            }
            if (label == blocks) sizes.pop_back();
        }
    };
    rec(0, 0);
    return out;
}

Rational Vertex::value(std::size_t cell) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), cell,
                               [](const VertexEntry& e, std::size_t c) { return e.cell < c; });
    if (it == entries.end() || it->cell != cell) return Rational(0);
    Rational q(static_cast<long>(it->numerator), static_cast<unsigned long>(denominator));
    q.canonicalize();
    return q;
}

void Vertex::canonicalize() {
    std::sort(entries.begin(), entries.end(), [](const VertexEntry& a, const VertexEntry& b) { return a.cell < b.cell; });
    entries.erase(std::remove_if(entries.begin(), entries.end(), [](const VertexEntry& e) { return e.numerator == 0; }),
                  entries.end());
    if (denominator == 1) return;
    std::int64_t g = denominator;
    for (const auto& e : entries) g = std::gcd(g, e.numerator);
    if (g > 1) {
        denominator /= g;
        for (auto& e : entries) e.numerator /= g;
    }
}

bool canonical_less(const Vertex& a, const Vertex& b) {
    // Walk both sparse tables; first differing dense cell decides.
    std::size_t i = 0, j = 0;
    while (i < a.entries.size() || j < b.entries.size()) {
        const std::uint32_t ca = i < a.entries.size() ? a.entries[i].cell : std::numeric_limits<std::uint32_t>::max();
        const std::uint32_t cb = j < b.entries.size() ? b.entries[j].cell : std::numeric_limits<std::uint32_t>::max();
        if (ca < cb) return false;  // a has a positive value where b has 0
        if (cb < ca) return true;
        const __int128 lhs = static_cast<__int128>(a.entries[i].numerator) * b.denominator;
        const __int128 rhs = static_cast<__int128>(b.entries[j].numerator) * a.denominator;
        if (lhs != rhs) return lhs < rhs;
        ++i;
        ++j;
    }
    return false;
}

VertexSet::VertexSet(Scenario scenario, Resource resource, int k)
    : scenario_(std::move(scenario)), resource_(resource), k_(k) {}

std::uint32_t VertexSet::add_partition(const Partition& p) {
    for (std::size_t i = 0; i < partitions_.size(); ++i)
        if (partitions_[i] == p) return static_cast<std::uint32_t>(i);
    partitions_.push_back(p);
    return static_cast<std::uint32_t>(partitions_.size() - 1);
}

void VertexSet::push(Vertex v) {
    v.canonicalize();
    vertices_.push_back(std::move(v));
}

void VertexSet::finalize() {
    auto hash = [](const Vertex& v) {
        std::uint64_t h = 1469598103934665603ULL ^ static_cast<std::uint64_t>(v.denominator);
        for (const auto& e : v.entries) {
            h = (h ^ e.cell) * 1099511628211ULL;
            h = (h ^ static_cast<std::uint64_t>(e.numerator)) * 1099511628211ULL;
        }
        return h;
    };
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
    seen.reserve(vertices_.size() * 2);
    std::vector<Vertex> unique;
    unique.reserve(vertices_.size());
    for (auto& v : vertices_) {
        auto& bucket = seen[hash(v)];
        bool dup = false;
        for (std::size_t idx : bucket)
            if (unique[idx].same_point(v)) {
                dup = true;
                break;
            }
        if (dup) continue;
        bucket.push_back(unique.size());
        unique.push_back(std::move(v));
    }
    std::stable_sort(unique.begin(), unique.end(), canonical_less);
    vertices_ = std::move(unique);
}

std::string VertexSet::provenance(std::size_t i) const {
    const Vertex& v = vertices_.at(i);
    std::ostringstream os;
    os << to_string(resource_) << '[';
    if (v.partition < partitions_.size()) os << partitions_[v.partition].to_string();
    os << "](";
    for (std::size_t f = 0; f < v.factors.size(); ++f) os << (f ? "," : "") << v.factors[f];
    os << ')';
    return os.str();
}

std::vector<Rational> VertexSet::dense(std::size_t i) const {
    const Vertex& v = vertices_.at(i);
    std::vector<Rational> table(scenario_.table_size(), Rational(0));
    for (const auto& e : v.entries) {
        Rational q(static_cast<long>(e.numerator), static_cast<unsigned long>(v.denominator));
        q.canonicalize();
        table[e.cell] = q;
    }
    return table;
}

Correlation VertexSet::to_correlation(std::size_t i) const { return Correlation::from_rational(scenario_, dense(i)); }

Vertex vertex_from_table(const Scenario& s, const std::vector<Rational>& table) {
    if (table.size() != s.table_size()) throw std::invalid_argument("vertex table size mismatch");
    mpz_class l = 1;
    for (const auto& q : table) {
        if (q < 0) throw std::invalid_argument("vertex has a negative entry");
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    }
    if (!l.fits_slong_p()) throw std::overflow_error("vertex denominator exceeds 64 bits");
    Vertex v;
    v.denominator = l.get_si();
    for (std::size_t c = 0; c < table.size(); ++c) {
        if (table[c] == 0) continue;
        const mpz_class num = table[c].get_num() * (l / table[c].get_den());
        v.entries.push_back({static_cast<std::uint32_t>(c), num.get_si()});
    }
    v.canonicalize();
    return v;
}

namespace {

Partition whole_group(int n) {
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    return Partition({all});
}

// Per-vertex rows: for each joint input of the block, the (outcome, numerator) pairs.
struct FactorRows {
    std::vector<std::uint32_t> offsets;  // size = vertices * (inputs + 1) flattened per vertex
    std::vector<std::pair<std::uint32_t, std::int64_t>> data;
    std::vector<std::int64_t> denominators;
    std::size_t inputs = 0;

    explicit FactorRows(const VertexSet& set) {
        const auto& s = set.scenario();
        inputs = s.joint_inputs();
        offsets.reserve(set.size() * (inputs + 1));
        for (const auto& v : set.vertices()) {
            std::size_t e = 0;
            for (std::size_t x = 0; x < inputs; ++x) {
                offsets.push_back(static_cast<std::uint32_t>(data.size()));
                while (e < v.entries.size() && v.entries[e].cell / s.joint_outputs() == x) {
                    data.emplace_back(static_cast<std::uint32_t>(v.entries[e].cell % s.joint_outputs()),
                                      v.entries[e].numerator);
                    ++e;
                }
            }
            offsets.push_back(static_cast<std::uint32_t>(data.size()));
            denominators.push_back(v.denominator);
        }
    }
    std::pair<std::uint32_t, std::uint32_t> row(std::size_t v, std::size_t x) const {
        const std::size_t base = v * (inputs + 1) + x;
        return {offsets[base], offsets[base + 1]};
    }
};

struct ProductPlan {
    std::vector<FactorRows> rows;
    std::vector<std::vector<std::size_t>> input_of;    // [block][global X] -> block X
    std::vector<std::vector<std::size_t>> output_emb;  // [block][block A] -> global A contribution
    std::vector<std::size_t> counts;
    std::size_t joint_inputs = 0, joint_outputs = 0;
    std::uint64_t total = 1;
};

ProductPlan make_plan(const Scenario& s, const Partition& partition, const std::vector<const VertexSet*>& blocks) {
    ProductPlan plan;
    plan.joint_inputs = s.joint_inputs();
    plan.joint_outputs = s.joint_outputs();
    const int n = s.parties();
    std::vector<std::size_t> out_weight(n, 1);
    for (int i = n - 2; i >= 0; --i) out_weight[i] = out_weight[i + 1] * static_cast<std::size_t>(s.outputs(i + 1));
    std::vector<int> digits(n);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto& group = partition.blocks()[b];
        const Scenario gs = s.restrict(group);
        if (!(blocks[b]->scenario() == gs)) throw std::invalid_argument("block vertex set scenario mismatch");
        plan.rows.emplace_back(*blocks[b]);
        std::vector<std::size_t> in(s.joint_inputs());
        std::vector<int> sub(group.size());
        for (std::size_t x = 0; x < s.joint_inputs(); ++x) {
            mixed_radix_decode(x, s.inputs(), digits);
            for (std::size_t k = 0; k < group.size(); ++k) sub[k] = digits[group[k]];
            in[x] = gs.encode_inputs(sub);
        }
        plan.input_of.push_back(std::move(in));
        std::vector<std::size_t> emb(gs.joint_outputs());
        for (std::size_t a = 0; a < gs.joint_outputs(); ++a) {
            mixed_radix_decode(a, gs.outputs(), sub);
            std::size_t g = 0;
            for (std::size_t k = 0; k < group.size(); ++k) g += static_cast<std::size_t>(sub[k]) * out_weight[group[k]];
            emb[a] = g;
        }
        plan.output_emb.push_back(std::move(emb));
        plan.counts.push_back(blocks[b]->size());
        plan.total *= blocks[b]->size();
    }
    return plan;
}

Vertex build_product(const ProductPlan& plan, std::uint64_t index, std::uint32_t partition_id) {
    const std::size_t g = plan.counts.size();
    Vertex v;
    v.partition = partition_id;
    v.factors.resize(g);
    for (std::size_t b = g; b-- > 0;) {
        v.factors[b] = static_cast<std::uint32_t>(index % plan.counts[b]);
        index /= plan.counts[b];
    }
    v.denominator = 1;
    for (std::size_t b = 0; b < g; ++b) v.denominator *= plan.rows[b].denominators[v.factors[b]];
    // Cartesian product of the block rows at every global input.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ranges(g);
    std::vector<std::uint32_t> cursor(g);
    for (std::size_t x = 0; x < plan.joint_inputs; ++x) {
        bool empty = false;
        for (std::size_t b = 0; b < g; ++b) {
            ranges[b] = plan.rows[b].row(v.factors[b], plan.input_of[b][x]);
            cursor[b] = ranges[b].first;
            empty = empty || ranges[b].first == ranges[b].second;
        }
        if (empty) continue;
        while (true) {
            std::size_t a = 0;
            std::int64_t num = 1;
            for (std::size_t b = 0; b < g; ++b) {
                const auto& [out, n] = plan.rows[b].data[cursor[b]];
                a += plan.output_emb[b][out];
                num *= n;
            }
            v.entries.push_back({static_cast<std::uint32_t>(x * plan.joint_outputs + a), num});
            std::size_t b = g;
            while (b-- > 0) {
                if (++cursor[b] < ranges[b].second) break;
                cursor[b] = ranges[b].first;
            }
            if (b == static_cast<std::size_t>(-1)) break;
        }
    }
    v.canonicalize();
    return v;
}

std::uint64_t checked_power(std::uint64_t base, std::uint64_t exp, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && r > cap / base) return cap + 1;
        r *= base;
    }
    return r;
}

}  // namespace

namespace kernels {

std::vector<Vertex> partition_products_serial(const Scenario& scenario, const Partition& partition,
                                              const std::vector<const VertexSet*>& blocks,
                                              std::uint32_t partition_id) {
    const ProductPlan plan = make_plan(scenario, partition, blocks);
    std::vector<Vertex> out;
    out.reserve(plan.total);
    for (std::uint64_t i = 0; i < plan.total; ++i) out.push_back(build_product(plan, i, partition_id));
    return out;
}

std::vector<Vertex> partition_products_parallel(const Scenario& scenario, const Partition& partition,
                                                const std::vector<const VertexSet*>& blocks,
                                                std::uint32_t partition_id) {
    const ProductPlan plan = make_plan(scenario, partition, blocks);
    std::vector<Vertex> out(plan.total);
    const auto total = static_cast<long long>(plan.total);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < total; ++i) out[i] = build_product(plan, static_cast<std::uint64_t>(i), partition_id);
    return out;
}

}  // namespace kernels

VertexSet group_deterministic_vertices(const Scenario& gs, const PolytopeOptions& opts) {
    const std::uint64_t count = checked_power(gs.joint_outputs(), gs.joint_inputs(), opts.max_group_vertices);
    if (count > opts.max_group_vertices)
        throw CapExceededError("group of " + gs.describe() + " has more than " +
                               std::to_string(opts.max_group_vertices) + " deterministic strategies");
    VertexSet set(gs, Resource::S, gs.parties());
    const std::uint32_t pid = set.add_partition(whole_group(gs.parties()));
    const std::size_t jin = gs.joint_inputs(), jout = gs.joint_outputs();
    std::vector<std::size_t> f(jin, 0);
    for (std::uint64_t id = 0; id < count; ++id) {
        Vertex v;
        v.partition = pid;
        v.factors = {static_cast<std::uint32_t>(id)};
        std::uint64_t rest = id;
        for (std::size_t x = jin; x-- > 0;) {
            f[x] = rest % jout;
            rest /= jout;
        }
        for (std::size_t x = 0; x < jin; ++x) v.entries.push_back({static_cast<std::uint32_t>(x * jout + f[x]), 1});
        set.push(std::move(v));
    }
    set.finalize();
    return set;
}

VertexSet local_deterministic_vertices(const Scenario& s, const PolytopeOptions& opts) {
    std::vector<VertexSet> singles;
    std::uint64_t total = 1;
    for (int p = 0; p < s.parties(); ++p) {
        const std::vector<int> one{p};
        singles.push_back(group_deterministic_vertices(s.restrict(one), opts));
        total *= singles.back().size();
        if (total > opts.max_vertices) throw CapExceededError("local vertex count exceeds cap");
    }
    std::vector<const VertexSet*> blocks;
    for (const auto& v : singles) blocks.push_back(&v);
    VertexSet set(s, Resource::L, 1);
    const Partition part = Partition::singletons(s.parties());
    const std::uint32_t pid = set.add_partition(part);
    auto verts = opts.parallel ? kernels::partition_products_parallel(s, part, blocks, pid)
                               : kernels::partition_products_serial(s, part, blocks, pid);
    for (auto& v : verts) set.push(std::move(v));
    set.finalize();
    return set;
}

VertexSet ns_vertices(const Scenario& s, const PolytopeOptions& opts) {
    if (s.table_size() > opts.max_ns_table)
        throw CapExceededError("no-signaling enumeration capped at table dimension " +
                               std::to_string(opts.max_ns_table) + "; " + s.describe() + " has " +
                               std::to_string(s.table_size()));
    if (s.parties() == 1) {
        VertexSet det = group_deterministic_vertices(s, opts);
        VertexSet set(s, Resource::NS, 1);
        set.add_partition(whole_group(1));
        for (const auto& v : det.vertices()) set.push(v);
        set.finalize();
        return set;
    }
    const std::size_t dim = s.table_size();
    linalg::RationalMatrix eq;
    linalg::RationalVector rhs;
    for (std::size_t x = 0; x < s.joint_inputs(); ++x) {
        linalg::RationalVector row(dim, Rational(0));
        for (std::size_t a = 0; a < s.joint_outputs(); ++a) row[s.cell(x, a)] = 1;
        eq.push_back(std::move(row));
        rhs.emplace_back(1);
    }
    const int n = s.parties();
    std::vector<int> xs(n), as(n);
    for (int i = 0; i < n; ++i) {
        // sum_{a_i} P(a|x) at x_i = t equals the same sum at x_i = 0.
        std::map<std::pair<std::size_t, std::size_t>, linalg::RationalVector> rows;
        for (std::size_t x = 0; x < s.joint_inputs(); ++x) {
            mixed_radix_decode(x, s.inputs(), xs);
            if (xs[i] == 0) continue;
            for (std::size_t a = 0; a < s.joint_outputs(); ++a) {
                mixed_radix_decode(a, s.outputs(), as);
                auto as0 = as;
                as0[i] = 0;
                const std::size_t key_a = s.encode_outputs(as0);
                auto& row = rows[{x, key_a}];
                if (row.empty()) row.assign(dim, Rational(0));
                auto xs0 = xs;
                xs0[i] = 0;
                row[s.cell(x, a)] += 1;
                row[s.cell(s.encode_inputs(xs0), a)] -= 1;
            }
        }
        for (auto& [key, row] : rows) {
            eq.push_back(std::move(row));
            rhs.emplace_back(0);
        }
    }
    linalg::RationalMatrix ineq;
    linalg::RationalVector ineq_rhs(dim, Rational(0));
    for (std::size_t c = 0; c < dim; ++c) {
        linalg::RationalVector row(dim, Rational(0));
        row[c] = 1;
        ineq.push_back(std::move(row));
    }
    const auto points = dd::enumerate_vertices(eq, rhs, ineq, ineq_rhs, dim);
    VertexSet set(s, Resource::NS, s.parties());
    const std::uint32_t pid = set.add_partition(whole_group(s.parties()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        Vertex v = vertex_from_table(s, points[i]);
        v.partition = pid;
        set.push(std::move(v));
    }
    set.finalize();
    for (std::size_t i = 0; i < set.size(); ++i) const_cast<Vertex&>(set[i]).factors = {static_cast<std::uint32_t>(i)};
    return set;
}

const VertexSet* GroupVertexLibrary::find(Resource r, const Scenario& s) const {
    for (const auto& set : sets_)
        if (set.resource() == r && set.scenario() == s) return &set;
    return nullptr;
}

bool group_vertices_available(const Scenario& gs, Resource resource, const GroupVertexLibrary& library,
                              const PolytopeOptions& opts) {
    if (library.find(resource, gs)) return true;
    switch (resource) {
        case Resource::L: return true;
        case Resource::S:
            return checked_power(gs.joint_outputs(), gs.joint_inputs(), opts.max_group_vertices) <=
                   opts.max_group_vertices;
        case Resource::NS: return gs.parties() <= 2 && gs.table_size() <= opts.max_ns_table;
        default: return false;
    }
}

VertexSet group_vertices(const Scenario& gs, Resource resource, const GroupVertexLibrary& library,
                         const PolytopeOptions& opts) {
    if (const VertexSet* ext = library.find(resource, gs)) return *ext;
    switch (resource) {
        case Resource::L: return local_deterministic_vertices(gs, opts);
        case Resource::S: return group_deterministic_vertices(gs, opts);
        case Resource::NS:
            if (gs.parties() > 2)
                throw MissingVertexDataError("no-signaling vertices for a " + std::to_string(gs.parties()) +
                                             "-party group (" + gs.describe() + ") need an external vertex file");
            return ns_vertices(gs, opts);
        default:
            throw std::invalid_argument("no vertex construction for resource " + to_string(resource));
    }
}

VertexSet producible_vertices(const Scenario& s, Resource resource, int k, const std::optional<Partition>& partition,
                              const GroupVertexLibrary& library, const PolytopeOptions& opts) {
    const int n = s.parties();
    if (k < 1 || k > n) throw std::invalid_argument("producible_vertices: need 1 <= k <= n");
    if (resource == Resource::Q || resource == Resource::T)
        throw std::invalid_argument("no vertex construction for resource " + to_string(resource));
    std::vector<Partition> parts;
    if (partition) {
        if (partition->parties() != n) throw std::invalid_argument("partition does not match the scenario");
        if (partition->max_block() > k) throw std::invalid_argument("partition has a block larger than k");
        parts.push_back(*partition);
    } else if (resource == Resource::L) {
        parts.push_back(Partition::singletons(n));
    } else {
        parts = partitions(n, k);
    }

    std::map<std::string, VertexSet> cache;
    auto block_set = [&](const std::vector<int>& group) -> const VertexSet& {
        const Scenario gs = s.restrict(group);
        const std::string key = gs.describe();
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, group_vertices(gs, resource, library, opts)).first;
        return it->second;
    };

    VertexSet set(s, resource, k);
    std::uint64_t produced = 0;
    for (const auto& part : parts) {
        std::vector<const VertexSet*> blocks;
        std::uint64_t count = 1;
        for (const auto& group : part.blocks()) {
            blocks.push_back(&block_set(group));
            count *= blocks.back()->size();
        }
        produced += count;
        if (produced > opts.max_vertices)
            throw CapExceededError("producible vertex count exceeds cap of " + std::to_string(opts.max_vertices));
        const std::uint32_t pid = set.add_partition(part);
        auto verts = opts.parallel ? kernels::partition_products_parallel(s, part, blocks, pid)
                                   : kernels::partition_products_serial(s, part, blocks, pid);
        for (auto& v : verts) set.push(std::move(v));
    }
    set.finalize();
    if (partition) set.set_restriction(*partition);
    return set;
}

}  // namespace mgs
