#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mgs {

/// A marginal was requested from a correlation whose marginal on `subset`
/// depends on the complementary inputs.
class SignalingError : public std::runtime_error {
public:
    SignalingError(const std::string& what, std::vector<int> subset)
        : std::runtime_error(what), subset_(std::move(subset)) {}
    const std::vector<int>& subset() const { return subset_; }

private:
    std::vector<int> subset_;
};

/// Conditioning on an event of probability zero.
class VanishingProbabilityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A configurable size cap (vertex count, table dimension) would be exceeded.
class CapExceededError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Vertex data for some group scenario is not available in-repo.
class MissingVertexDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mgs
