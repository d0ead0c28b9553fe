#include "growthlab/projective.hpp"

#include <algorithm>

#include "growthlab/error.hpp"

namespace growthlab::projective {

namespace {

void scale_canonical(const Field& F, Vector& x) {
    auto it = std::find_if(x.begin(), x.end(), [&](const Element& e) { return !F.is_zero(e); });
    if (it == x.end()) fail(ErrorCode::InvalidArgument, "zero vector has no projective class");
    const Element inv = F.inv(*it);
    for (auto& e : x) e = F.mul(e, inv);
}

Element bracket(const Field& F, const ProjPoint& x, const ProjPoint& y) {
    return F.sub(F.mul(x[0], y[1]), F.mul(x[1], y[0]));
}

void require_line(const ProjPoint& p) {
    if (p.dim() != 1) fail(ErrorCode::DimMismatch, "expected a point of the projective line");
}

}  // namespace

ProjVector::ProjVector(Field field, Vector coords) : field_(std::move(field)), x_(std::move(coords)) {
    if (x_.size() < 2) fail(ErrorCode::DimMismatch, "projective vectors need at least two coordinates");
    for (auto& e : x_) field_.check(e);
    scale_canonical(field_, x_);
}

std::string ProjVector::format() const {
    std::string s = "[";
    for (std::size_t i = 0; i < x_.size(); ++i) s += (i ? ":" : "") + field_.format(x_[i]);
    return s + "]";
}

ProjPoint ProjPoint::parse(const Field& F, std::string_view text) {
    auto l = text.find('['), r = text.rfind(']');
    if (l == std::string_view::npos || r == std::string_view::npos || r < l)
        fail(ErrorCode::ParseError, "projective point must look like [x:y:...]");
    Vector v;
    std::string_view body = text.substr(l + 1, r - l - 1);
    while (true) {
        const auto c = body.find(':');
        v.push_back(F.parse_element(body.substr(0, c)));
        if (c == std::string_view::npos) break;
        body.remove_prefix(c + 1);
    }
    return ProjPoint(F, std::move(v));
}

bool ProjHyperplane::contains(const ProjPoint& p) const {
    if (p.dim() != dim()) fail(ErrorCode::DimMismatch, "point and hyperplane dimensions differ");
    const Field& F = field();
    Element s = F.zero();
    for (std::size_t i = 0; i < coords().size(); ++i) s = F.add(s, F.mul((*this)[i], p[i]));
    return F.is_zero(s);
}

ProjMap::ProjMap(Field field, Matrix m) : field_(std::move(field)), m_(std::move(m)) {
    if (m_.size() < 2) fail(ErrorCode::DimMismatch, "projective maps act on PF^n with n >= 1");
    for (const auto& row : m_)
        if (row.size() != m_.size()) fail(ErrorCode::DimMismatch, "projective map matrix must be square");
    if (field_.is_zero(linalg::determinant(field_, m_))) fail(ErrorCode::InvalidArgument, "singular matrix");
    Vector flat;
    for (const auto& row : m_) flat.insert(flat.end(), row.begin(), row.end());
    scale_canonical(field_, flat);
    const std::size_t n = m_.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m_[i][j] = flat[i * n + j];
}

ProjMap ProjMap::identity(const Field& F, std::size_t dim) { return ProjMap(F, linalg::identity(F, dim + 1)); }

ProjMap ProjMap::inverse() const { return ProjMap(field_, *linalg::inverse(field_, m_)); }

ProjMap ProjMap::operator*(const ProjMap& o) const {
    if (o.dim() != dim()) fail(ErrorCode::DimMismatch, "composing maps of different dimension");
    return ProjMap(field_, linalg::multiply(field_, m_, o.m_));
}

std::string ProjMap::format() const {
    std::string s = "[";
    for (std::size_t i = 0; i < m_.size(); ++i) {
        s += i ? ",[" : "[";
        for (std::size_t j = 0; j < m_.size(); ++j) s += (j ? "," : "") + field_.format(m_[i][j]);
        s += "]";
    }
    return s + "]";
}

ProjPoint embed_affine(const Field& F, const Vector& x) {
    Vector v = x;
    v.push_back(F.one());
    return ProjPoint(F, std::move(v));
}

bool at_infinity(const ProjPoint& p) { return p.field().is_zero(p.coords().back()); }

Vector to_affine(const ProjPoint& p) {
    if (at_infinity(p)) fail(ErrorCode::AtInfinity, "point " + p.format() + " lies at infinity");
    const Field& F = p.field();
    const Element inv = F.inv(p.coords().back());
    Vector out;
    for (std::size_t i = 0; i + 1 < p.coords().size(); ++i) out.push_back(F.mul(p[i], inv));
    return out;
}

ProjPoint line_point(const Field& F, const Element& x) { return ProjPoint(F, {x, F.one()}); }
ProjPoint line_infinity(const Field& F) { return ProjPoint(F, {F.one(), F.zero()}); }

ProjPoint apply(const ProjMap& tau, const ProjPoint& p) {
    if (tau.dim() != p.dim()) fail(ErrorCode::DimMismatch, "map and point dimensions differ");
    return ProjPoint(tau.field(), linalg::apply(tau.field(), tau.matrix(), p.coords()));
}

ProjHyperplane apply(const ProjMap& tau, const ProjHyperplane& h) {
    if (tau.dim() != h.dim()) fail(ErrorCode::DimMismatch, "map and hyperplane dimensions differ");
    const Field& F = tau.field();
    // a . x = 0 becomes (a T^-1) . (T x) = 0.
    const Matrix inv = tau.inverse().matrix();
    return ProjHyperplane(F, linalg::apply(F, linalg::transpose(inv), h.coords()));
}

bool is_frame(const std::vector<ProjPoint>& P) {
    if (P.empty()) return false;
    const std::size_t n = P[0].dim();
    if (P.size() != n + 2) return false;
    for (const auto& p : P)
        if (p.dim() != n || !(p.field() == P[0].field())) return false;
    for (std::size_t skip = 0; skip < P.size(); ++skip) {
        Matrix rows;
        for (std::size_t i = 0; i < P.size(); ++i)
            if (i != skip) rows.push_back(P[i].coords());
        if (linalg::rank(P[0].field(), rows) != n + 1) return false;
    }
    return true;
}

namespace {

// Matrix sending e_i to multiples of P_i and e_1 + ... + e_{n+1} to P_{n+2}.
Matrix frame_basis(const std::vector<ProjPoint>& P) {
    const Field& F = P[0].field();
    const std::size_t n1 = P[0].dim() + 1;
    Matrix cols(n1, Vector(n1));
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n1; ++j) cols[i][j] = P[j][i];
    const auto lambda = linalg::solve(F, cols, P[n1].coords());
    if (!lambda) fail(ErrorCode::NotAFrame, "basis points are dependent");
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n1; ++j) cols[i][j] = F.mul(cols[i][j], (*lambda)[j]);
    return cols;
}

}  // namespace

ProjMap frame_map(const std::vector<ProjPoint>& P, const std::vector<ProjPoint>& Q) {
    if (P.empty() || Q.empty() || P[0].dim() != Q[0].dim()) fail(ErrorCode::DimMismatch, "frames of different dimension");
    if (!is_frame(P) || !is_frame(Q)) fail(ErrorCode::NotAFrame, "input is not a frame");
    const Field& F = P[0].field();
    require_same(F, Q[0].field());
    const Matrix TP = frame_basis(P), TQ = frame_basis(Q);
    ProjMap mu(F, linalg::multiply(F, TQ, *linalg::inverse(F, TP)));
    for (std::size_t i = 0; i < P.size(); ++i)
        if (!(apply(mu, P[i]) == Q[i])) fail(ErrorCode::NotAFrame, "frame map failed verification");
    return mu;
}

ProjPoint cross_ratio(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c, const ProjPoint& d) {
    for (const auto* p : {&a, &b, &c, &d}) require_line(*p);
    if (a == b || b == c || a == c) fail(ErrorCode::DegenerateTriple, "cross ratio needs distinct a, b, c");
    const Field& F = a.field();
    return ProjPoint(F, {F.mul(bracket(F, a, b), bracket(F, c, d)), F.mul(bracket(F, b, c), bracket(F, a, d))});
}

ProjMap tau_abc(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c) {
    for (const auto* p : {&a, &b, &c}) require_line(*p);
    if (a == b || b == c || a == c) fail(ErrorCode::DegenerateTriple, "tau_abc needs distinct a, b, c");
    const Field& F = a.field();
    const Element ab = bracket(F, a, b), bc = bracket(F, b, c);
    return ProjMap(F, {{F.neg(F.mul(ab, c[1])), F.mul(ab, c[0])}, {F.neg(F.mul(bc, a[1])), F.mul(bc, a[0])}});
}

ProjPoint psi_embed(const ProjMap& tau) {
    if (tau.dim() != 1) fail(ErrorCode::DimMismatch, "psi is defined on maps of the projective line");
    const auto& m = tau.matrix();
    return ProjPoint(tau.field(), {m[0][0], m[0][1], m[1][0], m[1][1]});
}

bool on_quadric(const ProjPoint& x) {
    if (x.dim() != 3) fail(ErrorCode::DimMismatch, "the quadric lives in PF^3");
    const Field& F = x.field();
    return F.mul(x[0], x[3]) == F.mul(x[1], x[2]);
}

ProjHyperplane plane_of_pair(const ProjPoint& a, const ProjPoint& b) {
    require_line(a);
    require_line(b);
    const Field& F = a.field();
    return ProjHyperplane(F, {F.mul(b[1], a[0]), F.mul(b[1], a[1]), F.neg(F.mul(b[0], a[0])), F.neg(F.mul(b[0], a[1]))});
}

std::size_t rank_of(const std::vector<ProjVector>& vs) {
    if (vs.empty()) return 0;
    Matrix rows;
    for (const auto& v : vs) {
        if (v.dim() != vs[0].dim()) fail(ErrorCode::DimMismatch, "vectors of different dimension");
        rows.push_back(v.coords());
    }
    return linalg::rank(vs[0].field(), rows);
}

IncidenceTally incidence_count_projective(const std::vector<ProjPoint>& P, const std::vector<ProjHyperplane>& H) {
    IncidenceTally t;
    t.per_point.reserve(P.size());
    for (const auto& p : P) {
        std::uint64_t m = 0;
        for (const auto& h : H) m += h.contains(p);
        t.per_point.push_back(m);
        t.total += m;
        ++t.histogram[m];
    }
    return t;
}

std::vector<ProjPoint> all_points(const Field& F, std::size_t dim) {
    const auto elems = F.elements();
    const std::size_t q = elems.size();
    double total = 1;
    for (std::size_t i = 0; i <= dim; ++i) total *= static_cast<double>(q);
    if (total > static_cast<double>(kEnumerationBudget)) fail(ErrorCode::BudgetExceeded, "projective space too large to enumerate");
    std::vector<ProjPoint> out;
    // Leading 1 at position k, zeros before, anything after.
    for (std::size_t k = 0; k <= dim; ++k) {
        std::vector<std::size_t> idx(dim - k, 0);
        while (true) {
            Vector v(dim + 1, F.zero());
            v[k] = F.one();
            for (std::size_t i = 0; i < idx.size(); ++i) v[k + 1 + i] = elems[idx[i]];
            out.emplace_back(F, v);
            std::size_t pos = idx.size();
            while (pos > 0 && ++idx[pos - 1] == q) idx[--pos] = 0;
            if (pos == 0) break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ProjMap> all_maps(const Field& F, std::size_t dim) {
    const std::size_t n1 = dim + 1;
    // Canonical matrices are exactly the canonical points of PF^{n1^2 - 1}.
    std::vector<ProjMap> out;
    for (const auto& p : all_points(F, n1 * n1 - 1)) {
        Matrix m(n1, Vector(n1));
        for (std::size_t i = 0; i < n1 * n1; ++i) m[i / n1][i % n1] = p[i];
        if (F.is_zero(linalg::determinant(F, m))) continue;
        out.emplace_back(F, std::move(m));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace growthlab::projective
