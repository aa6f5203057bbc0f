#include "mgs/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mgs/errors.hpp"

namespace mgs {

namespace {

// Projection of every joint index of `scenario` onto the listed parties.
struct Projection {
    std::vector<std::size_t> inputs;   // joint input -> sub joint input
    std::vector<std::size_t> outputs;  // joint output -> sub joint output
};

Projection project(const Scenario& scenario, std::span<const int> parties) {
    const Scenario sub = scenario.restrict(parties);
    Projection proj;
    proj.inputs.resize(scenario.joint_inputs());
    proj.outputs.resize(scenario.joint_outputs());
    std::vector<int> digits(scenario.parties()), picked(parties.size());
    for (std::size_t x = 0; x < scenario.joint_inputs(); ++x) {
        mixed_radix_decode(x, scenario.inputs(), digits);
        for (std::size_t k = 0; k < parties.size(); ++k) picked[k] = digits[parties[k]];
        proj.inputs[x] = sub.encode_inputs(picked);
    }
    for (std::size_t a = 0; a < scenario.joint_outputs(); ++a) {
        mixed_radix_decode(a, scenario.outputs(), digits);
        for (std::size_t k = 0; k < parties.size(); ++k) picked[k] = digits[parties[k]];
        proj.outputs[a] = sub.encode_outputs(picked);
    }
    return proj;
}

std::vector<int> complement(int n, std::span<const int> parties) {
    std::vector<bool> used(n, false);
    for (int p : parties) {
        if (p < 0 || p >= n) throw std::out_of_range("party index out of range");
        if (used[p]) throw std::invalid_argument("duplicate party index");
        used[p] = true;
    }
    std::vector<int> rest;
    for (int i = 0; i < n; ++i)
        if (!used[i]) rest.push_back(i);
    return rest;
}

double magnitude(const Rational& q) { return std::fabs(q.get_d()); }
double magnitude(double v) { return std::fabs(v); }

template <typename T>
const std::vector<T>& table_of(const Correlation& p);
template <>
const std::vector<Rational>& table_of<Rational>(const Correlation& p) { return p.exact_table(); }
template <>
const std::vector<double>& table_of<double>(const Correlation& p) { return p.real_table(); }

template <typename T>
Correlation make(Scenario s, std::vector<T> table);
template <>
Correlation make<Rational>(Scenario s, std::vector<Rational> table) {
    return Correlation::from_rational(std::move(s), std::move(table));
}
template <>
Correlation make<double>(Scenario s, std::vector<double> table) {
    return Correlation::from_real(std::move(s), std::move(table));
}

std::string party_list(std::span<const int> parties) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < parties.size(); ++i) os << (i ? "," : "") << parties[i];
    os << "}";
    return os.str();
}

template <typename T>
NoSignalingReport no_signaling_impl(const Correlation& p, double tolerance) {
    const auto& s = p.scenario();
    const auto& table = table_of<T>(p);
    NoSignalingReport report;
    const int n = s.parties();
    if (n == 1) return report;
    for (int i = 0; i < n; ++i) {
        std::vector<int> keep;
        for (int j = 0; j < n; ++j)
            if (j != i) keep.push_back(j);
        const Projection rest = project(s, keep);
        const std::vector<int> self{i};
        const Projection own = project(s, self);
        const Scenario sub = s.restrict(keep);
        const std::size_t width = sub.table_size();
        const int mi = s.inputs(i);
        std::vector<T> m(static_cast<std::size_t>(mi) * width, T(0));
        for (std::size_t x = 0; x < s.joint_inputs(); ++x) {
            const std::size_t base = own.inputs[x] * width + rest.inputs[x] * sub.joint_outputs();
            for (std::size_t a = 0; a < s.joint_outputs(); ++a) m[base + rest.outputs[a]] += table[s.cell(x, a)];
        }
        for (int xi = 1; xi < mi; ++xi) {
            for (std::size_t c = 0; c < width; ++c) {
                const T diff = m[static_cast<std::size_t>(xi) * width + c] - m[c];
                const double v = magnitude(diff);
                const bool violated = std::is_same_v<T, Rational> ? diff != 0 : v > tolerance;
                if (violated && (report.pass || v > report.worst_violation)) {
                    report.pass = false;
                    report.worst_violation = v;
                    report.subset = keep;
                    report.signaling_party = i;
                }
            }
        }
    }
    return report;
}

template <typename T>
Correlation condition_impl(const Correlation& p, std::span<const int> held, std::span<const int> settings,
                           std::span<const int> outcomes) {
    const auto& s = p.scenario();
    const auto& table = table_of<T>(p);
    const std::vector<int> rest = complement(s.parties(), held);
    if (rest.empty()) throw std::invalid_argument("condition: no parties remain");
    if (settings.size() != held.size() || outcomes.size() != held.size())
        throw std::invalid_argument("condition: settings/outcomes must match held parties");
    for (std::size_t k = 0; k < held.size(); ++k) {
        if (settings[k] < 0 || settings[k] >= s.inputs(held[k]) || outcomes[k] < 0 ||
            outcomes[k] >= s.outputs(held[k]))
            throw std::out_of_range("condition: setting or outcome out of range");
    }
    const Scenario sub = s.restrict(rest);
    std::vector<T> out(sub.table_size(), T(0));
    std::vector<int> xs(s.parties()), as(s.parties()), xr(rest.size()), ar(rest.size());
    for (std::size_t x = 0; x < sub.joint_inputs(); ++x) {
        mixed_radix_decode(x, sub.inputs(), xr);
        for (std::size_t k = 0; k < rest.size(); ++k) xs[rest[k]] = xr[k];
        for (std::size_t k = 0; k < held.size(); ++k) xs[held[k]] = settings[k];
        const std::size_t gx = s.encode_inputs(xs);
        T total(0);
        for (std::size_t a = 0; a < sub.joint_outputs(); ++a) {
            mixed_radix_decode(a, sub.outputs(), ar);
            for (std::size_t k = 0; k < rest.size(); ++k) as[rest[k]] = ar[k];
            for (std::size_t k = 0; k < held.size(); ++k) as[held[k]] = outcomes[k];
            const T& v = table[s.cell(gx, s.encode_outputs(as))];
            out[sub.cell(x, a)] = v;
            total += v;
        }
        const bool vanishing = std::is_same_v<T, Rational> ? total == 0 : magnitude(total) <= 0.0;
        if (vanishing)
            throw VanishingProbabilityError("condition: conditioning event has probability zero for held parties " +
                                            party_list(held));
        for (std::size_t a = 0; a < sub.joint_outputs(); ++a) out[sub.cell(x, a)] /= total;
    }
    return make<T>(sub, std::move(out));
}

template <typename T>
Correlation marginal_impl(const Correlation& p, std::span<const int> subset, double tolerance) {
    const auto& s = p.scenario();
    const auto& table = table_of<T>(p);
    const std::vector<int> rest = complement(s.parties(), subset);
    if (subset.empty()) throw std::invalid_argument("marginal: empty subset");
    const Scenario sub = s.restrict(subset);
    const Projection keep = project(s, subset);
    std::size_t rest_inputs = 1;
    std::vector<std::size_t> rest_index(s.joint_inputs(), 0);
    if (!rest.empty()) {
        const Projection other = project(s, rest);
        rest_index = other.inputs;
        rest_inputs = s.restrict(rest).joint_inputs();
    }
    const std::size_t width = sub.table_size();
    std::vector<T> m(rest_inputs * width, T(0));
    for (std::size_t x = 0; x < s.joint_inputs(); ++x) {
        const std::size_t base = rest_index[x] * width + keep.inputs[x] * sub.joint_outputs();
        for (std::size_t a = 0; a < s.joint_outputs(); ++a) m[base + keep.outputs[a]] += table[s.cell(x, a)];
    }
    for (std::size_t r = 1; r < rest_inputs; ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            const T diff = m[r * width + c] - m[c];
            const bool violated = std::is_same_v<T, Rational> ? diff != 0 : magnitude(diff) > tolerance;
            if (violated)
                throw SignalingError("marginal on " + party_list(subset) + " depends on complementary inputs",
                                     std::vector<int>(subset.begin(), subset.end()));
        }
    }
    m.resize(width);
    return make<T>(sub, std::move(m));
}

template <typename T>
Correlation product_impl(std::span<const GroupCorrelation> factors, int n) {
    std::vector<int> inputs(n), outputs(n);
    for (const auto& f : factors) {
        for (std::size_t k = 0; k < f.group.size(); ++k) {
            inputs[f.group[k]] = f.correlation.scenario().inputs(static_cast<int>(k));
            outputs[f.group[k]] = f.correlation.scenario().outputs(static_cast<int>(k));
        }
    }
    Scenario joint(inputs, outputs);
    std::vector<Projection> projs;
    for (const auto& f : factors) projs.push_back(project(joint, f.group));
    std::vector<T> table(joint.table_size());
    for (std::size_t x = 0; x < joint.joint_inputs(); ++x) {
        for (std::size_t a = 0; a < joint.joint_outputs(); ++a) {
            T v(1);
            for (std::size_t f = 0; f < factors.size(); ++f) {
                const auto& fs = factors[f].correlation.scenario();
                const auto& ft = table_of<T>(factors[f].correlation);
                v *= ft[fs.cell(projs[f].inputs[x], projs[f].outputs[a])];
                if (v == 0) break;
            }
            table[joint.cell(x, a)] = v;
        }
    }
    return make<T>(std::move(joint), std::move(table));
}

}  // namespace

Correlation Correlation::from_rational(Scenario scenario, std::vector<Rational> table) {
    if (table.size() != scenario.table_size())
        throw std::invalid_argument("correlation table has " + std::to_string(table.size()) + " entries, scenario needs " +
                                    std::to_string(scenario.table_size()));
    for (std::size_t x = 0; x < scenario.joint_inputs(); ++x) {
        Rational sum(0);
        for (std::size_t a = 0; a < scenario.joint_outputs(); ++a) {
            auto& v = table[scenario.cell(x, a)];
            v.canonicalize();
            if (v < 0) throw std::invalid_argument("correlation has a negative entry at input " + std::to_string(x));
            sum += v;
        }
        if (sum != 1)
            throw std::invalid_argument("correlation row for input " + std::to_string(x) + " sums to " +
                                        format_rational(sum) + ", not 1");
    }
    Correlation c;
    c.scenario_ = std::move(scenario);
    c.mode_ = NumericMode::Rational;
    c.exact_ = std::move(table);
    return c;
}

Correlation Correlation::from_real(Scenario scenario, std::vector<double> table, double tolerance) {
    if (table.size() != scenario.table_size())
        throw std::invalid_argument("correlation table has " + std::to_string(table.size()) + " entries, scenario needs " +
                                    std::to_string(scenario.table_size()));
    for (std::size_t x = 0; x < scenario.joint_inputs(); ++x) {
        double sum = 0.0;
        for (std::size_t a = 0; a < scenario.joint_outputs(); ++a) {
            const double v = table[scenario.cell(x, a)];
            if (!std::isfinite(v)) throw std::invalid_argument("correlation has a non-finite entry");
            if (v < -tolerance)
                throw std::invalid_argument("correlation has a negative entry at input " + std::to_string(x));
            sum += v;
        }
        if (std::fabs(sum - 1.0) > tolerance)
            throw std::invalid_argument("correlation row for input " + std::to_string(x) + " sums to " +
                                        std::to_string(sum) + ", not 1");
    }
    Correlation c;
    c.scenario_ = std::move(scenario);
    c.mode_ = NumericMode::Real;
    c.real_ = std::move(table);
    return c;
}

double Correlation::at(std::size_t x, std::size_t a) const {
    const std::size_t c = scenario_.cell(x, a);
    return is_exact() ? exact_[c].get_d() : real_[c];
}

const Rational& Correlation::exact_at(std::size_t x, std::size_t a) const {
    return exact_table()[scenario_.cell(x, a)];
}

const std::vector<Rational>& Correlation::exact_table() const {
    if (!is_exact()) throw std::logic_error("correlation is in real mode");
    return exact_;
}

const std::vector<double>& Correlation::real_table() const {
    if (is_exact()) throw std::logic_error("correlation is in rational mode");
    return real_;
}

std::vector<double> Correlation::to_doubles() const {
    if (!is_exact()) return real_;
    std::vector<double> out(exact_.size());
    std::transform(exact_.begin(), exact_.end(), out.begin(), [](const Rational& q) { return q.get_d(); });
    return out;
}

Correlation Correlation::to_real() const {
    if (!is_exact()) return *this;
    return from_real(scenario_, to_doubles());
}

bool Correlation::operator==(const Correlation& other) const {
    return scenario_ == other.scenario_ && mode_ == other.mode_ && exact_ == other.exact_ && real_ == other.real_;
}

RationalizedCorrelation rationalize(const Correlation& p, std::int64_t denominator_bound) {
    if (p.is_exact()) return {p, 0.0, true};
    const auto& s = p.scenario();
    const auto& table = p.real_table();
    const int n = s.parties();
    std::vector<Rational> out(s.table_size());
    // Correlator rounding only reconstructs non-signaling tables.
    const bool binary = s.uniform_outputs() == 2 && n <= 16 && is_no_signaling(p).pass;
    // Rounds correlators on the grid 1/denominator; false if some entry came out negative.
    const auto round_correlators = [&](std::int64_t denominator) {
        const std::size_t subsets = std::size_t{1} << n;
        std::vector<std::vector<Rational>> corr(subsets);
        std::vector<int> xs(n), as(n);
        for (std::size_t mask = 1; mask < subsets; ++mask) {
            std::vector<int> parties;
            for (int i = 0; i < n; ++i)
                if (mask >> (n - 1 - i) & 1) parties.push_back(i);
            const Scenario sub = s.restrict(parties);
            corr[mask].resize(sub.joint_inputs());
            std::vector<int> xsub(parties.size());
            for (std::size_t xv = 0; xv < sub.joint_inputs(); ++xv) {
                mixed_radix_decode(xv, sub.inputs(), xsub);
                std::fill(xs.begin(), xs.end(), 0);
                for (std::size_t k = 0; k < parties.size(); ++k) xs[parties[k]] = xsub[k];
                const std::size_t x = s.encode_inputs(xs);
                double e = 0.0;
                for (std::size_t a = 0; a < s.joint_outputs(); ++a) {
                    mixed_radix_decode(a, s.outputs(), as);
                    int parity = 0;
                    for (int party : parties) parity ^= as[party];
                    e += (parity ? -1.0 : 1.0) * table[s.cell(x, a)];
                }
                corr[mask][xv] = round_to_grid(e, denominator);
            }
        }
        const Rational scale(1, static_cast<unsigned long>(subsets));
        for (std::size_t x = 0; x < s.joint_inputs(); ++x) {
            mixed_radix_decode(x, s.inputs(), xs);
            for (std::size_t a = 0; a < s.joint_outputs(); ++a) {
                mixed_radix_decode(a, s.outputs(), as);
                Rational v(1);
                for (std::size_t mask = 1; mask < subsets; ++mask) {
                    std::size_t xv = 0;
                    int parity = 0;
                    for (int i = 0; i < n; ++i) {
                        if (mask >> (n - 1 - i) & 1) {
                            xv = xv * static_cast<std::size_t>(s.inputs(i)) + static_cast<std::size_t>(xs[i]);
                            parity ^= as[i];
                        }
                    }
                    if (parity)
                        v -= corr[mask][xv];
                    else
                        v += corr[mask][xv];
                }
                v *= scale;
                if (v < 0) return false;
                out[s.cell(x, a)] = v;
            }
        }
        return true;
    };
    if (binary) {
        // Entries near zero can round below it; refine the grid until they do not.
        std::int64_t denominator = denominator_bound;
        while (!round_correlators(denominator)) {
            if (denominator > 100'000'000'000'000)
                throw std::domain_error("rationalize: rounding produced a negative entry at every grid");
            denominator *= 10;
        }
    } else {
        const auto d = static_cast<long>(denominator_bound);
        for (std::size_t x = 0; x < s.joint_inputs(); ++x) {
            std::vector<long> units(s.joint_outputs());
            std::vector<std::pair<double, std::size_t>> remainders;
            long total = 0;
            for (std::size_t a = 0; a < s.joint_outputs(); ++a) {
                const double scaled = std::max(0.0, table[s.cell(x, a)]) * static_cast<double>(d);
                units[a] = static_cast<long>(std::floor(scaled));
                total += units[a];
                remainders.emplace_back(scaled - std::floor(scaled), a);
            }
            std::stable_sort(remainders.begin(), remainders.end(),
                             [](const auto& l, const auto& r) { return l.first > r.first; });
            for (std::size_t k = 0; total < d; ++k, ++total) ++units[remainders[k % remainders.size()].second];
            for (; total > d; --total) --*std::max_element(units.begin(), units.end());
            for (std::size_t a = 0; a < s.joint_outputs(); ++a) {
                Rational q(units[a], static_cast<unsigned long>(d));
                q.canonicalize();
                out[s.cell(x, a)] = q;
            }
        }
    }
    double err = 0.0;
    for (std::size_t c = 0; c < out.size(); ++c) err = std::max(err, std::fabs(out[c].get_d() - table[c]));
    Correlation exact = Correlation::from_rational(s, std::move(out));
    return {std::move(exact), err, binary};
}

NoSignalingReport is_no_signaling(const Correlation& p, double tolerance) {
    return p.is_exact() ? no_signaling_impl<Rational>(p, 0.0) : no_signaling_impl<double>(p, tolerance);
}

Correlation condition(const Correlation& p, std::span<const int> held, std::span<const int> settings,
                      std::span<const int> outcomes) {
    if (held.empty()) return p;
    return p.is_exact() ? condition_impl<Rational>(p, held, settings, outcomes)
                        : condition_impl<double>(p, held, settings, outcomes);
}

Correlation marginal(const Correlation& p, std::span<const int> subset, double tolerance) {
    return p.is_exact() ? marginal_impl<Rational>(p, subset, 0.0) : marginal_impl<double>(p, subset, tolerance);
}

double FullCorrelatorTable::at(std::size_t x, int r) const {
    const std::size_t c = x * static_cast<std::size_t>(residues_) + static_cast<std::size_t>(r);
    return mode_ == NumericMode::Rational ? exact_[c].get_d() : real_[c];
}

const Rational& FullCorrelatorTable::exact_at(std::size_t x, int r) const {
    if (mode_ != NumericMode::Rational) throw std::logic_error("full-correlator table is in real mode");
    return exact_[x * static_cast<std::size_t>(residues_) + static_cast<std::size_t>(r)];
}

FullCorrelatorTable full_correlators(const Correlation& p) {
    const auto& s = p.scenario();
    const int l = s.uniform_outputs();
    if (l == 0) throw std::invalid_argument("full correlators need a uniform output count");
    FullCorrelatorTable t;
    t.scenario_ = s;
    t.residues_ = l;
    t.mode_ = p.mode();
    std::vector<int> residue(s.joint_outputs());
    std::vector<int> as(s.parties());
    for (std::size_t a = 0; a < s.joint_outputs(); ++a) {
        mixed_radix_decode(a, s.outputs(), as);
        residue[a] = std::accumulate(as.begin(), as.end(), 0) % l;
    }
    const std::size_t size = s.joint_inputs() * static_cast<std::size_t>(l);
    if (p.is_exact()) {
        t.exact_.assign(size, Rational(0));
        for (std::size_t x = 0; x < s.joint_inputs(); ++x)
            for (std::size_t a = 0; a < s.joint_outputs(); ++a)
                t.exact_[x * l + residue[a]] += p.exact_at(x, a);
    } else {
        t.real_.assign(size, 0.0);
        for (std::size_t x = 0; x < s.joint_inputs(); ++x)
            for (std::size_t a = 0; a < s.joint_outputs(); ++a) t.real_[x * l + residue[a]] += p.at(x, a);
    }
    return t;
}

DeterministicResidueFunction::DeterministicResidueFunction(Scenario scenario, std::vector<int> residues)
    : scenario_(std::move(scenario)), values_(std::move(residues)) {
    const int l = scenario_.uniform_outputs();
    if (l == 0) throw std::invalid_argument("residue function needs a uniform output count");
    if (values_.size() != scenario_.joint_inputs())
        throw std::invalid_argument("residue function must be defined on every joint input");
    for (int v : values_)
        if (v < 0 || v >= l) throw std::out_of_range("residue out of range");
}

Correlation simulate_full_correlators(const DeterministicResidueFunction& f) {
    const auto& s = f.scenario();
    const int l = f.residues();
    mpz_class denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), static_cast<unsigned long>(l), static_cast<unsigned long>(s.parties() - 1));
    const Rational weight(mpz_class(1), denom);
    std::vector<int> residue(s.joint_outputs());
    std::vector<int> as(s.parties());
    for (std::size_t a = 0; a < s.joint_outputs(); ++a) {
        mixed_radix_decode(a, s.outputs(), as);
        residue[a] = std::accumulate(as.begin(), as.end(), 0) % l;
    }
    std::vector<Rational> table(s.table_size(), Rational(0));
    for (std::size_t x = 0; x < s.joint_inputs(); ++x)
        for (std::size_t a = 0; a < s.joint_outputs(); ++a)
            if (residue[a] == f(x)) table[s.cell(x, a)] = weight;
    return Correlation::from_rational(s, std::move(table));
}

Correlation mix(std::span<const WeightedCorrelation> parts) {
    if (parts.empty()) throw std::invalid_argument("mix: no components");
    const Scenario& s = parts.front().correlation.scenario();
    Rational total(0);
    bool exact = true;
    for (const auto& part : parts) {
        if (part.weight < 0) throw std::invalid_argument("mix: negative weight");
        if (!(part.correlation.scenario() == s)) throw std::invalid_argument("mix: scenario mismatch");
        total += part.weight;
        exact = exact && part.correlation.is_exact();
    }
    if (total != 1) throw std::invalid_argument("mix: weights sum to " + format_rational(total) + ", not 1");
    if (exact) {
        std::vector<Rational> table(s.table_size(), Rational(0));
        for (const auto& part : parts)
            for (std::size_t c = 0; c < table.size(); ++c) table[c] += part.weight * part.correlation.exact_table()[c];
        return Correlation::from_rational(s, std::move(table));
    }
    std::vector<double> table(s.table_size(), 0.0);
    for (const auto& part : parts) {
        const double w = part.weight.get_d();
        const auto values = part.correlation.to_doubles();
        for (std::size_t c = 0; c < table.size(); ++c) table[c] += w * values[c];
    }
    return Correlation::from_real(s, std::move(table));
}

Correlation product(std::span<const GroupCorrelation> factors) {
    if (factors.empty()) throw std::invalid_argument("product: no factors");
    int n = 0;
    bool exact = true;
    for (const auto& f : factors) {
        if (f.group.empty()) throw std::invalid_argument("product: empty group");
        if (static_cast<int>(f.group.size()) != f.correlation.scenario().parties())
            throw std::invalid_argument("product: group size does not match factor party count");
        n += static_cast<int>(f.group.size());
        exact = exact && f.correlation.is_exact();
    }
    std::vector<bool> seen(n, false);
    for (const auto& f : factors) {
        for (int p : f.group) {
            if (p < 0 || p >= n || seen[p]) throw std::invalid_argument("product: groups must be disjoint and cover 0..n-1");
            seen[p] = true;
        }
    }
    if (exact) return product_impl<Rational>(factors, n);
    std::vector<GroupCorrelation> real;
    for (const auto& f : factors) real.push_back({f.correlation.to_real(), f.group});
    return product_impl<double>(real, n);
}

Correlation deterministic(const Scenario& scenario, std::span<const std::size_t> outputs) {
    if (outputs.size() != scenario.joint_inputs())
        throw std::invalid_argument("deterministic: one joint outcome per joint input required");
    std::vector<Rational> table(scenario.table_size(), Rational(0));
    for (std::size_t x = 0; x < outputs.size(); ++x) {
        if (outputs[x] >= scenario.joint_outputs()) throw std::out_of_range("deterministic: outcome out of range");
        table[scenario.cell(x, outputs[x])] = 1;
    }
    return Correlation::from_rational(scenario, std::move(table));
}

}  // namespace mgs
