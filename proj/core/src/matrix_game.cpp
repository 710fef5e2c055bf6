#include <algorithm>
#include <cmath>
#include <limits>

#include "gabe/errors.hpp"
#include "gabe/planning.hpp"

namespace gabe {

namespace {

constexpr double kPivotEps = 1e-12;

void normalize(std::vector<double>& p) {
  double sum = 0.0;
  for (double& x : p) {
    x = std::max(0.0, x);
    sum += x;
  }
  for (double& x : p) x /= sum;
}

}  // namespace

// Shifts the matrix to be positive, then solves the column player's LP
//   max sum(y)  s.t.  A y <= 1, y >= 0
// whose optimum is 1/value. The row strategy is read off the dual prices of
// the slack columns.
MatrixGameSolution matrix_game_solve(const std::vector<std::vector<double>>& m) {
  if (m.empty() || m.front().empty()) throw PreconditionError("matrix game must be non-empty");
  const std::size_t rows = m.size();
  const std::size_t cols = m.front().size();
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& r : m) {
    if (r.size() != cols) throw PreconditionError("matrix game rows differ in length");
    for (double x : r) {
      if (!std::isfinite(x)) throw PreconditionError("matrix game entries must be finite");
      lo = std::min(lo, x);
    }
  }
  const double shift = 1.0 - lo;

  // Tableau: rows x (cols + rows + 1), last column is the right-hand side;
  // objective row stored separately as reduced costs.
  const std::size_t width = cols + rows + 1;
  std::vector<double> t(rows * width, 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return t[r * width + c]; };
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) at(i, j) = m[i][j] + shift;
    at(i, cols + i) = 1.0;
    at(i, width - 1) = 1.0;
  }
  std::vector<double> obj(width, 0.0);
  for (std::size_t j = 0; j < cols; ++j) obj[j] = -1.0;
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) basis[i] = cols + i;

  while (true) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (obj[j] < -kPivotEps) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = rows;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows; ++i) {
      const double a = at(i, enter);
      if (a <= kPivotEps) continue;
      const double ratio = at(i, width - 1) / a;
      if (ratio < best_ratio - kPivotEps ||
          (ratio <= best_ratio + kPivotEps && leave < rows && basis[i] < basis[leave])) {
        best_ratio = std::min(best_ratio, ratio);
        leave = i;
      }
    }
    // A positive matrix keeps the LP bounded; no leaving row means round-off.
    if (leave == rows) throw Error("matrix game simplex found an unbounded direction");
    const double pivot = at(leave, enter);
    for (std::size_t c = 0; c < width; ++c) at(leave, c) /= pivot;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave) continue;
      const double f = at(i, enter);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width; ++c) at(i, c) -= f * at(leave, c);
    }
    const double f = obj[enter];
    for (std::size_t c = 0; c < width; ++c) obj[c] -= f * at(leave, c);
    basis[leave] = enter;
  }

  const double z = obj[width - 1];
  MatrixGameSolution out;
  out.value = 1.0 / z - shift;
  out.row.assign(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) out.row[i] = obj[cols + i];
  out.column.assign(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < cols) out.column[basis[i]] = at(i, width - 1);
  }
  normalize(out.row);
  normalize(out.column);
  return out;
}

}  // namespace gabe
