#include "conlap/block_operator.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace conlap {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

BlockOperator::BlockOperator(int num_points, int block_size)
    : num_points_(num_points), block_size_(block_size) {
  if (num_points < 1 || block_size < 1) {
    throw std::invalid_argument("BlockOperator: dimensions must be positive");
  }
  diag_.assign(num_points_, Eigen::MatrixXcd::Zero(block_size_, block_size_));
  off_.resize(num_points_);
  scale_ = Eigen::VectorXd::Ones(num_points_);
}

void BlockOperator::set_scale(const Eigen::VectorXd& s) {
  if (s.size() != num_points_) {
    throw std::invalid_argument("BlockOperator: scale vector size mismatch");
  }
  if ((s.array() <= 0.0).any()) {
    throw std::invalid_argument("BlockOperator: scale entries must be positive");
  }
  scale_ = s;
}

void BlockOperator::set_diagonal(int i, const Eigen::MatrixXcd& b) {
  diag_.at(i) = b;
}

void BlockOperator::add_off_diagonal(int i, int j, const Eigen::MatrixXcd& b) {
  if (i == j) {
    throw std::invalid_argument("BlockOperator: use set_diagonal for i == j");
  }
  if (j < 0 || j >= num_points_) {
    throw std::out_of_range("BlockOperator: column index out of range");
  }
  auto& row = off_.at(i);
  auto it = std::lower_bound(
      row.begin(), row.end(), j,
      [](const auto& entry, int col) { return entry.first < col; });
  if (it != row.end() && it->first == j) {
    it->second += b;
  } else {
    row.insert(it, {j, b});
  }
}

const Eigen::MatrixXcd* BlockOperator::block(int i, int j) const {
  if (i == j) return &diag_.at(i);
  const auto& row = off_.at(i);
  auto it = std::lower_bound(
      row.begin(), row.end(), j,
      [](const auto& entry, int col) { return entry.first < col; });
  if (it != row.end() && it->first == j) return &it->second;
  return nullptr;
}

Eigen::MatrixXcd BlockOperator::block_raw(int i, int j) const {
  const Eigen::MatrixXcd* b = block(i, j);
  if (b == nullptr) {
    return Eigen::MatrixXcd::Zero(block_size_, block_size_);
  }
  return (scale_(j) / scale_(i)) * (*b);
}

std::size_t BlockOperator::stored_off_diagonal() const {
  std::size_t count = 0;
  for (const auto& row : off_) count += row.size();
  return count;
}

void BlockOperator::matvec(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  if (x.size() != dim()) {
    throw std::invalid_argument("BlockOperator: matvec dimension mismatch");
  }
  y.resize(dim());
  const int r = block_size_;
  for (int i = 0; i < num_points_; ++i) {
    Eigen::VectorXcd acc = diag_[i] * x.segment(static_cast<Eigen::Index>(i) * r, r);
    for (const auto& [j, b] : off_[i]) {
      acc.noalias() += b * x.segment(static_cast<Eigen::Index>(j) * r, r);
    }
    y.segment(static_cast<Eigen::Index>(i) * r, r) = acc;
  }
}

Eigen::VectorXcd BlockOperator::apply(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd y;
  matvec(x, y);
  return y;
}

Eigen::VectorXcd BlockOperator::apply_raw(const Eigen::VectorXcd& u) const {
  if (u.size() != dim()) {
    throw std::invalid_argument("BlockOperator: apply_raw dimension mismatch");
  }
  const int r = block_size_;
  Eigen::VectorXcd scaled(dim());
  for (int i = 0; i < num_points_; ++i) {
    scaled.segment(static_cast<Eigen::Index>(i) * r, r) =
        scale_(i) * u.segment(static_cast<Eigen::Index>(i) * r, r);
  }
  Eigen::VectorXcd y = apply(scaled);
  for (int i = 0; i < num_points_; ++i) {
    y.segment(static_cast<Eigen::Index>(i) * r, r) /= scale_(i);
  }
  return y;
}

Eigen::MatrixXcd BlockOperator::to_dense() const {
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(dim(), dim());
  const int r = block_size_;
  for (int i = 0; i < num_points_; ++i) {
    dense.block(static_cast<Eigen::Index>(i) * r,
                static_cast<Eigen::Index>(i) * r, r, r) = diag_[i];
    for (const auto& [j, b] : off_[i]) {
      dense.block(static_cast<Eigen::Index>(i) * r,
                  static_cast<Eigen::Index>(j) * r, r, r) = b;
    }
  }
  return dense;
}

BlockOperator BlockOperator::shifted(double s) const {
  BlockOperator out = *this;
  for (auto& d : out.diag_) {
    d += s * Eigen::MatrixXcd::Identity(block_size_, block_size_);
  }
  return out;
}

void BlockOperator::write_text(std::ostream& os) const {
  os << "conlap-block-operator 1\n";
  os << num_points_ << " " << block_size_ << " " << (regime_ok ? 1 : 0) << "\n";
  os << "scale\n";
  for (int i = 0; i < num_points_; ++i) {
    os << format_double(scale_(i)) << "\n";
  }
  std::size_t blocks = stored_off_diagonal() + static_cast<std::size_t>(num_points_);
  os << "blocks " << blocks << "\n";
  auto write_block = [&](int i, int j, const Eigen::MatrixXcd& b) {
    os << i << " " << j;
    for (int a = 0; a < block_size_; ++a) {
      for (int c = 0; c < block_size_; ++c) {
        os << " " << format_double(b(a, c).real()) << " "
           << format_double(b(a, c).imag());
      }
    }
    os << "\n";
  };
  for (int i = 0; i < num_points_; ++i) {
    write_block(i, i, diag_[i]);
    for (const auto& [j, b] : off_[i]) write_block(i, j, b);
  }
}

BlockOperator BlockOperator::read_text(std::istream& is) {
  std::string magic;
  int version = 0;
  is >> magic >> version;
  if (!is || magic != "conlap-block-operator" || version != 1) {
    throw std::runtime_error("block operator import: bad header");
  }
  int n = 0, r = 0, regime = 0;
  is >> n >> r >> regime;
  if (!is || n < 1 || r < 1) {
    throw std::runtime_error("block operator import: bad dimensions");
  }
  std::string token;
  is >> token;
  if (token != "scale") throw std::runtime_error("block operator import: expected scale");
  BlockOperator op(n, r);
  Eigen::VectorXd scale(n);
  for (int i = 0; i < n; ++i) is >> scale(i);
  is >> token;
  std::size_t blocks = 0;
  is >> blocks;
  if (!is || token != "blocks") {
    throw std::runtime_error("block operator import: expected block count");
  }
  for (std::size_t k = 0; k < blocks; ++k) {
    int i = 0, j = 0;
    is >> i >> j;
    Eigen::MatrixXcd b(r, r);
    for (int a = 0; a < r; ++a) {
      for (int c = 0; c < r; ++c) {
        double re = 0.0, im = 0.0;
        is >> re >> im;
        b(a, c) = std::complex<double>(re, im);
      }
    }
    if (!is) throw std::runtime_error("block operator import: truncated block data");
    if (i == j) {
      op.set_diagonal(i, b);
    } else {
      op.add_off_diagonal(i, j, b);
    }
  }
  op.set_scale(scale);
  op.regime_ok = (regime != 0);
  return op;
}

}  // namespace conlap
