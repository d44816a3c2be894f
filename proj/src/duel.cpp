#include "ipdlab/duel.hpp"

#include <cmath>

namespace ipdlab {

namespace {

constexpr double kDegenerate = 1e-12;

bool is_vertex(const ZdsPoint& pt) {
  return std::abs(pt.x + 1.0) <= kDegenerate &&
         std::abs(pt.y + 1.0) <= kDegenerate;
}

}  // namespace

double kappa(const ZdsPoint& pt) {
  const double az = pt.x * pt.z();
  return az / (1.0 + az);
}

DuelResult duel_payoffs(const ZdsPoint& x, const ZdsPoint& y,
                        const PayoffParams& params) {
  const PayoffParams n = normalize(params);
  if (!x.in_strip(n) || !y.in_strip(n))
    throw ConstraintError("duel points must lie in the ZDS strip");
  DuelResult out;
  out.z_x = x.z();
  out.z_y = y.z();
  out.determinant = x.y * y.y - x.x * y.x;
  if (out.determinant < -kDegenerate)
    throw NumericError("duel system determinant is negative");
  if (out.determinant <= kDegenerate) {
    // Only the vertex point against itself degenerates; both payoffs sit
    // on its value line.
    if (!(is_vertex(x) && is_vertex(y)))
      throw NumericError("singular duel system away from the vertex point");
    out.s_x = 0.5;
    out.s_y = 0.5;
    return out;
  }
  out.s_x = (y.x - x.y) / out.determinant;
  out.s_y = (x.x - y.y) / out.determinant;
  return out;
}

OrderingReport ordering_report(const ZdsPoint& x, const ZdsPoint& y,
                               const PayoffParams& params) {
  OrderingReport out;
  ZdsPoint a = x;
  ZdsPoint b = y;
  DuelResult d = duel_payoffs(a, b, params);
  if (d.z_x < d.z_y - kDegenerate) {
    std::swap(a, b);
    const DuelResult swapped{d.s_y, d.s_x, d.z_y, d.z_x, d.determinant};
    d = swapped;
    out.swapped = true;
  }

  auto push = [&](const char* lhs, double lv, const char* rhs, double rv,
                  bool strict) {
    OrderingRelation rel;
    rel.lhs = lhs;
    rel.rhs = rhs;
    rel.lhs_value = lv;
    rel.rhs_value = rv;
    rel.strict = strict;
    rel.holds = strict ? lv > rv : std::abs(lv - rv) <= 1e-9;
    out.relations.push_back(rel);
  };

  if (std::abs(d.z_x - d.z_y) <= kDegenerate) {
    // Same value line: everything collapses onto it.
    push("Z_X", d.z_x, "s_X", d.s_x, false);
    push("s_X", d.s_x, "s_Y", d.s_y, false);
    push("s_Y", d.s_y, "Z_Y", d.z_y, false);
  } else {
    if (a.x > kDegenerate) {
      push("Z_X", d.z_x, "s_Y", d.s_y, true);
      push("s_Y", d.s_y, "s_X", d.s_x, true);
    } else if (a.x < -kDegenerate) {
      push("s_Y", d.s_y, "Z_X", d.z_x, true);
      push("Z_X", d.z_x, "s_X", d.s_x, true);
    } else {
      push("Z_X", d.z_x, "s_Y", d.s_y, false);
      push("s_Y", d.s_y, "s_X", d.s_x, true);
    }
    if (b.x > kDegenerate) {
      push("s_Y", d.s_y, "s_X", d.s_x, true);
      push("s_X", d.s_x, "Z_Y", d.z_y, true);
    } else if (b.x < -kDegenerate) {
      push("s_Y", d.s_y, "Z_Y", d.z_y, true);
      push("Z_Y", d.z_y, "s_X", d.s_x, true);
    } else {
      push("s_Y", d.s_y, "s_X", d.s_x, true);
      push("s_X", d.s_x, "Z_Y", d.z_y, false);
    }
  }

  out.all_hold = true;
  for (const auto& rel : out.relations) out.all_hold = out.all_hold && rel.holds;
  return out;
}

}  // namespace ipdlab
