#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mgs {

/// Bell scenario: per-party input (setting) and output (outcome) counts.
///
/// Joint indices are mixed-radix with party 0 most significant:
/// X = sum_i x_i * prod_{j>i} m_j, and likewise for outcomes. Table cells
/// are laid out row-major as cell = X * joint_outputs() + A.
class Scenario {
public:
    Scenario() = default;
    Scenario(std::vector<int> inputs, std::vector<int> outputs);

    /// n parties, each with the same counts.
    static Scenario uniform(int parties, int inputs, int outputs);

    int parties() const { return static_cast<int>(inputs_.size()); }
    const std::vector<int>& inputs() const { return inputs_; }
    const std::vector<int>& outputs() const { return outputs_; }
    int inputs(int party) const { return inputs_[party]; }
    int outputs(int party) const { return outputs_[party]; }

    std::size_t joint_inputs() const { return joint_inputs_; }
    std::size_t joint_outputs() const { return joint_outputs_; }
    std::size_t table_size() const { return joint_inputs_ * joint_outputs_; }
    std::size_t cell(std::size_t x, std::size_t a) const { return x * joint_outputs_ + a; }

    std::size_t encode_inputs(std::span<const int> xs) const;
    std::size_t encode_outputs(std::span<const int> as) const;
    std::vector<int> decode_inputs(std::size_t x) const;
    std::vector<int> decode_outputs(std::size_t a) const;

    /// Scenario of the listed parties, in the given order.
    Scenario restrict(std::span<const int> parties) const;
    /// Appends the parties of `other` after this scenario's parties.
    Scenario extend(const Scenario& other) const;

    /// Common output count, or 0 when outputs differ between parties.
    int uniform_outputs() const;

    std::string describe() const;

    bool operator==(const Scenario& other) const {
        return inputs_ == other.inputs_ && outputs_ == other.outputs_;
    }

private:
    std::vector<int> inputs_;
    std::vector<int> outputs_;
    std::size_t joint_inputs_ = 1;
    std::size_t joint_outputs_ = 1;
};

/// Mixed-radix helpers shared by the modules.
std::size_t mixed_radix_encode(std::span<const int> digits, std::span<const int> radices);
void mixed_radix_decode(std::size_t index, std::span<const int> radices, std::span<int> digits);

}  // namespace mgs
