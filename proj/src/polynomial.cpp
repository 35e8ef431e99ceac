#include "mlcrit/polynomial.hpp"

#include "mlcrit/errors.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace mlcrit {

Ring::Ring(std::vector<std::string> vars, MonomialOrder order)
    : vars_(std::move(vars)), order_(std::move(order)) {
    if (static_cast<int>(vars_.size()) > kMaxVars)
        throw UsageError("ring exceeds the supported maximum of " + std::to_string(kMaxVars) + " variables");
    for (int i = 0; i < static_cast<int>(vars_.size()); ++i) {
        if (vars_[static_cast<std::size_t>(i)].empty()) throw UsageError("empty variable name");
        auto [it, fresh] = index_.emplace(vars_[static_cast<std::size_t>(i)], i);
        if (!fresh) throw UsageError("duplicate variable name '" + vars_[static_cast<std::size_t>(i)] + "'");
    }
}

std::optional<int> Ring::var_index(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

RingPtr make_ring(std::vector<std::string> vars, MonomialOrder order) {
    return std::make_shared<Ring>(std::move(vars), std::move(order));
}

Polynomial Polynomial::zero(RingPtr ring) {
    Polynomial p;
    p.ring_ = std::move(ring);
    return p;
}

Polynomial Polynomial::constant(RingPtr ring, Rat c) {
    Polynomial p;
    p.ring_ = std::move(ring);
    if (c != 0) p.terms_.push_back({std::move(c), Monomial::one()});
    return p;
}

Polynomial Polynomial::variable(RingPtr ring, int index, int power) {
    Polynomial p;
    p.ring_ = std::move(ring);
    if (index < 0 || index >= p.ring_->nvars()) throw UsageError("variable index out of range");
    if (power < 0) throw UsageError("negative exponent");
    if (power == 0) return constant(p.ring_, 1);
    p.terms_.push_back({Rat(1), Monomial::var(index, power)});
    return p;
}

Polynomial Polynomial::monomial(RingPtr ring, Rat c, Monomial m) {
    Polynomial p;
    p.ring_ = std::move(ring);
    if (c != 0) p.terms_.push_back({std::move(c), m});
    return p;
}

Polynomial Polynomial::from_terms(RingPtr ring, std::vector<Term> terms) {
    const Ring& R = *ring;
    std::sort(terms.begin(), terms.end(),
              [&](const Term& a, const Term& b) { return R.compare(a.mono, b.mono) > 0; });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
        if (t.coeff == 0) continue;
        if (!out.empty() && out.back().mono == t.mono) {
            out.back().coeff += t.coeff;
            if (out.back().coeff == 0) out.pop_back();
        } else {
            out.push_back(std::move(t));
        }
    }
    Polynomial p;
    p.ring_ = std::move(ring);
    p.terms_ = std::move(out);
    return p;
}

int Polynomial::total_degree() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, t.mono.degree);
    return d;
}

bool Polynomial::is_homogeneous() const {
    if (terms_.empty()) return true;
    int d = terms_[0].mono.degree;
    for (const auto& t : terms_)
        if (t.mono.degree != d) return false;
    return true;
}

Rat Polynomial::constant_value() const {
    assert(is_constant());
    return terms_.empty() ? Rat(0) : terms_[0].coeff;
}

bool Polynomial::uses_var(int i) const {
    for (const auto& t : terms_)
        if (t.mono[i] != 0) return true;
    return false;
}

Polynomial Polynomial::operator-() const {
    Polynomial p(*this);
    for (auto& t : p.terms_) t.coeff = -t.coeff;
    return p;
}

namespace {

void check_same_ring(const Polynomial& a, const Polynomial& b) {
    if (a.ring() == b.ring()) return;
    if (a.ring() && b.ring() && a.ring()->same_as(*b.ring())) return;
    throw UsageError("operands belong to different rings");
}

// Merge two term lists sorted descending; b's terms are scaled by c and
// shifted by `shift` on the fly.
std::vector<Term> merge_scaled(const Ring& R, const std::vector<Term>& a, const Rat& c, const Monomial& shift,
                               const std::vector<Term>& b, std::size_t a_from) {
    std::vector<Term> out;
    out.reserve(a.size() - a_from + b.size());
    std::size_t i = a_from, j = 0;
    while (i < a.size() && j < b.size()) {
        Monomial bm = mono_mul(shift, b[j].mono);
        int cmp = R.compare(a[i].mono, bm);
        if (cmp > 0) {
            out.push_back(a[i++]);
        } else if (cmp < 0) {
            out.push_back({c * b[j].coeff, bm});
            ++j;
        } else {
            Rat s = a[i].coeff + c * b[j].coeff;
            if (s != 0) out.push_back({std::move(s), a[i].mono});
            ++i;
            ++j;
        }
    }
    for (; i < a.size(); ++i) out.push_back(a[i]);
    for (; j < b.size(); ++j) out.push_back({c * b[j].coeff, mono_mul(shift, b[j].mono)});
    return out;
}

} // namespace

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    check_same_ring(a, b);
    return Polynomial::axpy(a, Rat(1), Monomial::one(), b);
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    check_same_ring(a, b);
    return Polynomial::axpy(a, Rat(-1), Monomial::one(), b);
}

Polynomial Polynomial::axpy(const Polynomial& a, const Rat& c, const Monomial& shift, const Polynomial& b) {
    Polynomial p;
    p.ring_ = a.ring_ ? a.ring_ : b.ring_;
    if (c == 0 || b.is_zero()) {
        p.terms_ = a.terms_;
        return p;
    }
    p.terms_ = merge_scaled(*p.ring_, a.terms_, c, shift, b.terms_, 0);
    return p;
}

Polynomial Polynomial::axpy_tail(const Polynomial& a, std::size_t from, const Rat& c, const Monomial& shift,
                                 const Polynomial& b) {
    Polynomial p;
    p.ring_ = a.ring_ ? a.ring_ : b.ring_;
    p.terms_ = merge_scaled(*p.ring_, a.terms_, c, shift, b.terms_, from);
    return p;
}

Polynomial Polynomial::axpy2(const Rat& s, const Polynomial& a, const Rat& c, const Monomial& shift,
                             const Polynomial& b) {
    Polynomial p;
    p.ring_ = a.ring_ ? a.ring_ : b.ring_;
    const Ring& R = *p.ring_;
    p.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() && j < b.terms_.size()) {
        Monomial bm = mono_mul(shift, b.terms_[j].mono);
        int cmp = R.compare(a.terms_[i].mono, bm);
        if (cmp > 0) {
            p.terms_.push_back({s * a.terms_[i].coeff, a.terms_[i].mono});
            ++i;
        } else if (cmp < 0) {
            p.terms_.push_back({c * b.terms_[j].coeff, bm});
            ++j;
        } else {
            Rat v = s * a.terms_[i].coeff + c * b.terms_[j].coeff;
            if (v != 0) p.terms_.push_back({std::move(v), a.terms_[i].mono});
            ++i;
            ++j;
        }
    }
    for (; i < a.terms_.size(); ++i) p.terms_.push_back({s * a.terms_[i].coeff, a.terms_[i].mono});
    for (; j < b.terms_.size(); ++j) p.terms_.push_back({c * b.terms_[j].coeff, mono_mul(shift, b.terms_[j].mono)});
    return p;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    check_same_ring(a, b);
    std::vector<Term> prod;
    prod.reserve(a.terms().size() * b.terms().size());
    for (const auto& ta : a.terms())
        for (const auto& tb : b.terms()) prod.push_back({ta.coeff * tb.coeff, mono_mul(ta.mono, tb.mono)});
    return Polynomial::from_terms(a.ring() ? a.ring() : b.ring(), std::move(prod));
}

Polynomial Polynomial::scaled(const Rat& c) const {
    if (c == 0) return zero(ring_);
    Polynomial p(*this);
    for (auto& t : p.terms_) t.coeff *= c;
    return p;
}

Polynomial Polynomial::pow(int e) const {
    if (e < 0) throw UsageError("negative exponent");
    Polynomial r = constant(ring_, 1);
    for (int k = 0; k < e; ++k) r = r * *this;
    return r;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coeff != b.terms_[i].coeff) return false;
    return true;
}

Polynomial Polynomial::differentiate(int var) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        int e = t.mono[var];
        if (e == 0) continue;
        Monomial m = t.mono;
        m.exp[static_cast<std::size_t>(var)] = static_cast<std::uint16_t>(e - 1);
        m.degree -= 1;
        out.push_back({t.coeff * e, m});
    }
    // Term order is preserved by d/dx within the surviving terms only for some
    // orders, so renormalize.
    return from_terms(ring_, std::move(out));
}

Rat Polynomial::evaluate(const std::vector<Rat>& point) const {
    if (static_cast<int>(point.size()) != ring_->nvars()) throw UsageError("evaluation point has wrong length");
    Rat sum(0);
    for (const auto& t : terms_) {
        Rat v = t.coeff;
        for (int i = 0; i < ring_->nvars(); ++i)
            for (int k = 0; k < t.mono[i]; ++k) v *= point[static_cast<std::size_t>(i)];
        sum += v;
    }
    return sum;
}

std::complex<double> Polynomial::evaluate(const std::vector<std::complex<double>>& point) const {
    if (static_cast<int>(point.size()) != ring_->nvars()) throw UsageError("evaluation point has wrong length");
    std::complex<double> sum = 0.0, comp = 0.0;
    for (const auto& t : terms_) {
        std::complex<double> v = to_double(t.coeff);
        for (int i = 0; i < ring_->nvars(); ++i) {
            std::complex<double> base = point[static_cast<std::size_t>(i)];
            for (int k = 0; k < t.mono[i]; ++k) v *= base;
        }
        std::complex<double> y = v - comp;
        std::complex<double> s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    return sum;
}

double Polynomial::evaluate(const std::vector<double>& point) const {
    if (static_cast<int>(point.size()) != ring_->nvars()) throw UsageError("evaluation point has wrong length");
    double sum = 0.0, comp = 0.0;
    for (const auto& t : terms_) {
        double v = to_double(t.coeff);
        for (int i = 0; i < ring_->nvars(); ++i) {
            double base = point[static_cast<std::size_t>(i)];
            for (int k = 0; k < t.mono[i]; ++k) v *= base;
        }
        double y = v - comp;
        double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    return sum;
}

Rat Polynomial::content() const {
    if (terms_.empty()) return Rat(0);
    Int num(0), den(1);
    for (const auto& t : terms_) {
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coeff.get_num().get_mpz_t());
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den().get_mpz_t());
    }
    Rat c(num, den);
    c.canonicalize();
    if (leading_coeff() < 0) c = -c;
    return c;
}

Polynomial Polynomial::primitive_part() const {
    if (terms_.empty()) return *this;
    Rat c = content();
    Polynomial p(*this);
    for (auto& t : p.terms_) t.coeff /= c;
    return p;
}

Polynomial Polynomial::monic() const {
    if (terms_.empty()) return *this;
    Rat lc = leading_coeff();
    Polynomial p(*this);
    for (auto& t : p.terms_) t.coeff /= lc;
    return p;
}

double Polynomial::coeff_one_norm() const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(to_double(t.coeff));
    return s;
}

Polynomial Polynomial::map_vars(const RingPtr& target, const std::vector<int>& var_map) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        Monomial m;
        for (int i = 0; i < ring_->nvars(); ++i) {
            if (t.mono[i] == 0) continue;
            int j = var_map[static_cast<std::size_t>(i)];
            if (j < 0) throw UsageError("variable '" + ring_->var_name(i) + "' has no image in the target ring");
            m.exp[static_cast<std::size_t>(j)] = static_cast<std::uint16_t>(m.exp[static_cast<std::size_t>(j)] + t.mono[i]);
        }
        m.degree = t.mono.degree;
        out.push_back({t.coeff, m});
    }
    return from_terms(target, std::move(out));
}

Polynomial Polynomial::with_ring(const RingPtr& target) const {
    if (!ring_->same_vars(*target)) throw UsageError("with_ring requires identical variables");
    std::vector<Term> copy = terms_;
    return from_terms(target, std::move(copy));
}

Polynomial Polynomial::substitute(int var, const Rat& value) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        Rat c = t.coeff;
        int e = t.mono[var];
        for (int k = 0; k < e; ++k) c *= value;
        if (c == 0) continue;
        Monomial m = t.mono;
        m.degree -= e;
        m.exp[static_cast<std::size_t>(var)] = 0;
        out.push_back({std::move(c), m});
    }
    return from_terms(ring_, std::move(out));
}

Polynomial Polynomial::substitute(int var, const Polynomial& value) const {
    check_same_ring(*this, value);
    // Cache powers of the replacement.
    std::vector<Polynomial> powers{constant(ring_, 1)};
    Polynomial sum = zero(ring_);
    for (const auto& t : terms_) {
        int e = t.mono[var];
        while (static_cast<int>(powers.size()) <= e) powers.push_back(powers.back() * value);
        Monomial m = t.mono;
        m.degree -= e;
        m.exp[static_cast<std::size_t>(var)] = 0;
        sum = sum + powers[static_cast<std::size_t>(e)].scaled(t.coeff) * monomial(ring_, Rat(1), m);
    }
    return sum;
}

Polynomial linear_substitute(const Polynomial& f, const RatMatrix& M, const RingPtr& target) {
    const RingPtr& src = f.ring();
    if (M.rows != src->nvars() || M.cols != target->nvars())
        throw UsageError("substitution matrix shape does not match the rings");

    // Rows of M as linear forms in the target ring.
    std::vector<Polynomial> images;
    images.reserve(static_cast<std::size_t>(M.rows));
    for (int i = 0; i < M.rows; ++i) {
        std::vector<Term> terms;
        for (int j = 0; j < M.cols; ++j)
            if (M.at(i, j) != 0) terms.push_back({M.at(i, j), Monomial::var(j)});
        images.push_back(Polynomial::from_terms(target, std::move(terms)));
    }

    std::vector<std::vector<Polynomial>> powers(static_cast<std::size_t>(M.rows));
    for (int i = 0; i < M.rows; ++i) powers[static_cast<std::size_t>(i)] = {Polynomial::constant(target, 1)};

    Polynomial sum = Polynomial::zero(target);
    for (const auto& t : f.terms()) {
        Polynomial prod = Polynomial::constant(target, t.coeff);
        for (int i = 0; i < M.rows; ++i) {
            int e = t.mono[i];
            if (e == 0) continue;
            auto& pw = powers[static_cast<std::size_t>(i)];
            while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * images[static_cast<std::size_t>(i)]);
            prod = prod * pw[static_cast<std::size_t>(e)];
        }
        sum = sum + prod;
    }
    return sum;
}

std::string format_monomial(const Ring& ring, const Monomial& m) {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < ring.nvars(); ++i) {
        if (m[i] == 0) continue;
        if (!first) os << "*";
        os << ring.var_name(i);
        if (m[i] > 1) os << "^" << m[i];
        first = false;
    }
    return os.str();
}

std::string format_polynomial(const Polynomial& f) {
    if (f.is_zero()) return "0";
    const Ring& R = *f.ring();
    std::ostringstream os;
    bool first = true;
    for (const auto& t : f.terms()) {
        Rat c = t.coeff;
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        std::string mono = format_monomial(R, t.mono);
        if (mono.empty()) {
            os << c.get_str();
        } else {
            if (c != 1) os << c.get_str() << "*";
            os << mono;
        }
        first = false;
    }
    return os.str();
}

} // namespace mlcrit
