#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mgs/correlation.hpp"

namespace mgs {

/// Resource hierarchy L < Q < NS < T < S. Only L, NS and S have vertex
/// constructions here; Q and T are carried as tags.
enum class Resource { L, Q, NS, T, S };

std::string to_string(Resource r);
Resource parse_resource(std::string_view text);

/// Disjoint blocks of parties covering 0..n-1, kept canonical: each block
/// sorted, blocks ordered by least element.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<std::vector<int>> blocks);

    /// "0,1|2,3"; validated against n parties.
    static Partition parse(std::string_view text, int parties);
    static Partition singletons(int parties);

    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    int parties() const { return parties_; }
    int max_block() const;
    std::string to_string() const;

    bool operator==(const Partition& o) const { return blocks_ == o.blocks_; }
    bool operator<(const Partition& o) const { return blocks_ < o.blocks_; }

private:
    std::vector<std::vector<int>> blocks_;
    int parties_ = 0;
};

/// Every set partition of n parties with blocks of size <= k, ordered by
/// restricted-growth string.
std::vector<Partition> partitions(int n, int k);

struct VertexEntry {
    std::uint32_t cell;
    std::int64_t numerator;
    bool operator==(const VertexEntry& o) const { return cell == o.cell && numerator == o.numerator; }
};

/// Sparse exact extremal correlation: value(cell) = numerator / denominator,
/// entries sorted by cell and reduced so the gcd of all numerators and the
/// denominator is 1.
struct Vertex {
    std::vector<VertexEntry> entries;
    std::int64_t denominator = 1;
    std::uint32_t partition = 0;          // index into VertexSet::partitions()
    std::vector<std::uint32_t> factors;   // group vertex id per block

    Rational value(std::size_t cell) const;
    void canonicalize();
    bool same_point(const Vertex& o) const { return denominator == o.denominator && entries == o.entries; }
};

/// Lexicographic order of the dense tables.
bool canonical_less(const Vertex& a, const Vertex& b);

class VertexSet {
public:
    VertexSet() = default;
    VertexSet(Scenario scenario, Resource resource, int k);

    const Scenario& scenario() const { return scenario_; }
    Resource resource() const { return resource_; }
    int k() const { return k_; }
    std::size_t size() const { return vertices_.size(); }
    bool empty() const { return vertices_.empty(); }
    const Vertex& operator[](std::size_t i) const { return vertices_[i]; }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Partition>& partitions() const { return partitions_; }
    /// Set when every vertex comes from one partition.
    const std::optional<Partition>& restriction() const { return restriction_; }

    std::uint32_t add_partition(const Partition& p);
    void set_restriction(Partition p) { restriction_ = std::move(p); }
    /// Canonicalizes `v` and appends it (no dedup until finalize()).
    void push(Vertex v);
    /// Removes duplicate points (first occurrence wins), then stable-sorts
    /// canonically.
    void finalize();

    /// e.g. "NS[0,1|2,3](5,17)"
    std::string provenance(std::size_t i) const;
    Correlation to_correlation(std::size_t i) const;
    std::vector<Rational> dense(std::size_t i) const;

private:
    Scenario scenario_;
    Resource resource_ = Resource::S;
    int k_ = 0;
    std::vector<Partition> partitions_;
    std::optional<Partition> restriction_;
    std::vector<Vertex> vertices_;
};

/// Exact sparse vertex from a rational table (must be a valid correlation).
Vertex vertex_from_table(const Scenario& s, const std::vector<Rational>& table);

struct PolytopeOptions {
    std::uint64_t max_group_vertices = 1'000'000;  // per group, deterministic strategies
    std::size_t max_ns_table = 64;                 // double description cap
    std::uint64_t max_vertices = 20'000'000;       // products before dedup
    bool parallel = true;
};

/// All joint deterministic strategies of a group (Svetlichny extremes).
VertexSet group_deterministic_vertices(const Scenario& group_scenario, const PolytopeOptions& opts = {});

/// Products of single-party deterministic strategies (local extremes).
VertexSet local_deterministic_vertices(const Scenario& scenario, const PolytopeOptions& opts = {});

/// Extreme points of the no-signaling polytope by double description.
VertexSet ns_vertices(const Scenario& scenario, const PolytopeOptions& opts = {});

/// Externally supplied group vertex sets (e.g. tripartite NS extremes).
class GroupVertexLibrary {
public:
    void add(VertexSet set) { sets_.push_back(std::move(set)); }
    const VertexSet* find(Resource r, const Scenario& s) const;
    bool empty() const { return sets_.empty(); }

private:
    std::vector<VertexSet> sets_;
};

/// Extreme points of a single group's polytope for `resource`, or throws
/// MissingVertexDataError / CapExceededError.
VertexSet group_vertices(const Scenario& group_scenario, Resource resource, const GroupVertexLibrary& library,
                         const PolytopeOptions& opts = {});

/// True when group vertices for (resource, group scenario) can be produced.
bool group_vertices_available(const Scenario& group_scenario, Resource resource, const GroupVertexLibrary& library,
                              const PolytopeOptions& opts = {});

/// Union over partitions with blocks <= k (or the given partition) of all
/// products of per-block extremal vertices; deduplicated and canonically
/// sorted. Local resource uses the singleton partition for every k.
VertexSet producible_vertices(const Scenario& scenario, Resource resource, int k,
                              const std::optional<Partition>& partition = std::nullopt,
                              const GroupVertexLibrary& library = {}, const PolytopeOptions& opts = {});

namespace kernels {

/// Products of per-block vertex sets for one partition, in lexicographic
/// factor order. The serial version is the reference for the OpenMP one.
std::vector<Vertex> partition_products_serial(const Scenario& scenario, const Partition& partition,
                                              const std::vector<const VertexSet*>& blocks, std::uint32_t partition_id);
std::vector<Vertex> partition_products_parallel(const Scenario& scenario, const Partition& partition,
                                                const std::vector<const VertexSet*>& blocks,
                                                std::uint32_t partition_id);

}  // namespace kernels

}  // namespace mgs
