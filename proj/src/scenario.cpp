#include "mgs/scenario.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace mgs {

namespace {

std::size_t checked_product(const std::vector<int>& counts, const char* what) {
    std::size_t total = 1;
    for (int c : counts) {
        if (c < 1) throw std::invalid_argument(std::string("scenario ") + what + " counts must be >= 1");
        if (total > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(c))
            throw std::invalid_argument("scenario too large");
        total *= static_cast<std::size_t>(c);
    }
    return total;
}

}  // namespace

Scenario::Scenario(std::vector<int> inputs, std::vector<int> outputs)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
    if (inputs_.empty()) throw std::invalid_argument("scenario needs at least one party");
    if (inputs_.size() != outputs_.size())
        throw std::invalid_argument("scenario input/output lists differ in length");
    joint_inputs_ = checked_product(inputs_, "input");
    joint_outputs_ = checked_product(outputs_, "output");
}

Scenario Scenario::uniform(int parties, int inputs, int outputs) {
    if (parties < 1) throw std::invalid_argument("scenario needs at least one party");
    return Scenario(std::vector<int>(parties, inputs), std::vector<int>(parties, outputs));
}

std::size_t mixed_radix_encode(std::span<const int> digits, std::span<const int> radices) {
    if (digits.size() != radices.size()) throw std::invalid_argument("digit count mismatch");
    std::size_t index = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] < 0 || digits[i] >= radices[i]) throw std::out_of_range("digit out of range");
        index = index * static_cast<std::size_t>(radices[i]) + static_cast<std::size_t>(digits[i]);
    }
    return index;
}

void mixed_radix_decode(std::size_t index, std::span<const int> radices, std::span<int> digits) {
    for (std::size_t i = radices.size(); i-- > 0;) {
        const auto r = static_cast<std::size_t>(radices[i]);
        digits[i] = static_cast<int>(index % r);
        index /= r;
    }
}

std::size_t Scenario::encode_inputs(std::span<const int> xs) const { return mixed_radix_encode(xs, inputs_); }
std::size_t Scenario::encode_outputs(std::span<const int> as) const { return mixed_radix_encode(as, outputs_); }

std::vector<int> Scenario::decode_inputs(std::size_t x) const {
    std::vector<int> xs(inputs_.size());
    mixed_radix_decode(x, inputs_, xs);
    return xs;
}

std::vector<int> Scenario::decode_outputs(std::size_t a) const {
    std::vector<int> as(outputs_.size());
    mixed_radix_decode(a, outputs_, as);
    return as;
}

Scenario Scenario::restrict(std::span<const int> parties) const {
    std::vector<int> in, out;
    for (int p : parties) {
        if (p < 0 || p >= this->parties()) throw std::out_of_range("party index out of range");
        in.push_back(inputs_[p]);
        out.push_back(outputs_[p]);
    }
    return Scenario(std::move(in), std::move(out));
}

Scenario Scenario::extend(const Scenario& other) const {
    auto in = inputs_;
    auto out = outputs_;
    in.insert(in.end(), other.inputs_.begin(), other.inputs_.end());
    out.insert(out.end(), other.outputs_.begin(), other.outputs_.end());
    return Scenario(std::move(in), std::move(out));
}

int Scenario::uniform_outputs() const {
    for (int o : outputs_)
        if (o != outputs_.front()) return 0;
    return outputs_.front();
}

std::string Scenario::describe() const {
    std::ostringstream os;
    os << parties() << " parties; inputs [";
    for (std::size_t i = 0; i < inputs_.size(); ++i) os << (i ? "," : "") << inputs_[i];
    os << "]; outputs [";
    for (std::size_t i = 0; i < outputs_.size(); ++i) os << (i ? "," : "") << outputs_[i];
    os << "]";
    return os.str();
}

}  // namespace mgs
