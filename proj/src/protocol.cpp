#include <cmath>
#include <string>

#include "entlab/error.hpp"
#include "entlab/locc.hpp"

namespace entlab {

namespace {

int party_dim(Party party, int d_A, int d_B) { return party == Party::A ? d_A : d_B; }

std::string label_of(const Instrument& inst, std::size_t i) {
  return i < inst.labels.size() ? inst.labels[i] : std::to_string(i);
}

// Validated and completed instrument for a branch acting on a d-dim space.
Instrument prepared(const Instrument& inst, int d) {
  for (const auto& k : inst.kraus) {
    if (k.cols() != d) {
      fail(ErrorKind::invalid_input,
           "Kraus operator expects input dim " + std::to_string(k.cols()) + ", state has " +
               std::to_string(d));
    }
  }
  if (!inst.labels.empty() && inst.labels.size() != inst.kraus.size()) {
    fail(ErrorKind::invalid_input, "instrument labels do not match outcomes");
  }
  return complete_instrument(inst);
}

void check_depth(const LoccProtocol& p, std::size_t cap) {
  if (p.rounds.size() > cap) {
    fail(ErrorKind::invalid_input, "protocol exceeds depth cap of " + std::to_string(cap));
  }
}

Leaf make_leaf(std::vector<std::string> history, int d_A, int d_B, const Vector& v) {
  Leaf leaf;
  leaf.history = std::move(history);
  leaf.dim_A = d_A;
  leaf.dim_B = d_B;
  leaf.probability = v.squaredNorm();
  leaf.state = leaf.probability > 0.0 ? Vector(v / std::sqrt(leaf.probability))
                                      : Vector(Vector::Zero(v.size()));
  return leaf;
}

}  // namespace

Instrument complete_instrument(const Instrument& inst) {
  if (inst.kraus.empty()) fail(ErrorKind::invalid_input, "instrument has no outcomes");
  const Eigen::Index d = inst.kraus.front().cols();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& k : inst.kraus) {
    if (k.cols() != d) fail(ErrorKind::invalid_input, "Kraus input dims differ");
    sum += k.adjoint() * k;
  }
  const SortedEigen e = sorted_eigen(sum);
  if (e.values(0) > 1.0 + 1e-9) {
    fail(ErrorKind::invalid_input, "instrument is not subnormalized (sum k*k > 1)");
  }
  Instrument out = inst;
  const Matrix gap = Matrix::Identity(d, d) - sum;
  if (operator_norm(gap) > 1e-12) {
    if (out.labels.empty()) {
      for (std::size_t i = 0; i < inst.kraus.size(); ++i) out.labels.push_back(std::to_string(i));
    }
    out.kraus.push_back(sqrt_psd(gap));
    out.labels.push_back("~");
  }
  return out;
}

const Instrument* Round::find(const std::string& history) const {
  const Instrument* wildcard = nullptr;
  for (const auto& [key, inst] : branches) {
    if (key == history) return &inst;
    if (key == "*") wildcard = &inst;
  }
  return wildcard;
}

std::string join_history(const std::vector<std::string>& history) {
  std::string out;
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (i) out += '/';
    out += history[i];
  }
  return out;
}

std::vector<Leaf> simulate(const LoccProtocol& p, const PureBipartiteState& psi,
                           std::size_t depth_cap) {
  check_depth(p, depth_cap);
  struct Node {
    std::vector<std::string> history;
    int d_A;
    int d_B;
    Vector v;
  };
  std::vector<Node> nodes{{{}, psi.dim_A(), psi.dim_B(), psi.amplitudes()}};
  for (const Round& round : p.rounds) {
    std::vector<Node> next;
    for (Node& node : nodes) {
      const Instrument* inst = round.find(join_history(node.history));
      if (!inst) {
        next.push_back(std::move(node));
        continue;
      }
      const Instrument full = prepared(*inst, party_dim(round.party, node.d_A, node.d_B));
      for (std::size_t i = 0; i < full.kraus.size(); ++i) {
        const Matrix& k = full.kraus[i];
        Node child{node.history, node.d_A, node.d_B, {}};
        child.history.push_back(label_of(full, i));
        if (round.party == Party::A) {
          child.v = apply_local(k, Matrix::Identity(node.d_B, node.d_B), node.v, node.d_A, node.d_B);
          child.d_A = static_cast<int>(k.rows());
        } else {
          child.v = apply_local(Matrix::Identity(node.d_A, node.d_A), k, node.v, node.d_A, node.d_B);
          child.d_B = static_cast<int>(k.rows());
        }
        next.push_back(std::move(child));
      }
    }
    nodes = std::move(next);
  }
  std::vector<Leaf> leaves;
  leaves.reserve(nodes.size());
  for (Node& n : nodes) leaves.push_back(make_leaf(std::move(n.history), n.d_A, n.d_B, n.v));
  return leaves;
}

std::vector<Leaf> simulate(const OneWayProtocol& p, const PureBipartiteState& psi) {
  if (p.alice_kraus.size() != p.bob_unitaries.size()) {
    fail(ErrorKind::invalid_input, "Kraus and correction counts differ");
  }
  std::vector<Leaf> leaves;
  for (std::size_t x = 0; x < p.alice_kraus.size(); ++x) {
    const Matrix& k = p.alice_kraus[x];
    const Matrix& u = p.bob_unitaries[x];
    const Vector v = apply_local(k, u, psi.amplitudes(), psi.dim_A(), psi.dim_B());
    std::vector<std::string> history;
    if (x < p.labels.size()) history.push_back(p.labels[x]);
    else history.push_back(std::to_string(x));
    leaves.push_back(make_leaf(std::move(history), static_cast<int>(k.rows()),
                               static_cast<int>(u.rows()), v));
  }
  return leaves;
}

OneWayProtocol one_way_reduce(const LoccProtocol& p, const PureBipartiteState& psi,
                              std::size_t depth_cap) {
  check_depth(p, depth_cap);
  const Matrix c = psi.coefficients();
  const int dB0 = psi.dim_B();

  // Node vector = (alice (x) bob) psi, with alice : C^{d_A0} -> C^{d_A} and
  // bob : C^{d_B0} -> C^{d_B} a partial isometry isometric on the support.
  struct Node {
    std::vector<std::string> history;
    Matrix alice;
    Matrix bob;
  };
  std::vector<Node> nodes{{{}, support_projection(c * c.adjoint()), Matrix::Identity(dB0, dB0)}};

  for (const Round& round : p.rounds) {
    std::vector<Node> next;
    for (Node& node : nodes) {
      const Instrument* inst = round.find(join_history(node.history));
      if (!inst) {
        next.push_back(std::move(node));
        continue;
      }
      const int d_A = static_cast<int>(node.alice.rows());
      const int d_B = static_cast<int>(node.bob.rows());
      const Instrument full = prepared(*inst, party_dim(round.party, d_A, d_B));

      if (round.party == Party::A) {
        for (std::size_t i = 0; i < full.kraus.size(); ++i) {
          Node child{node.history, full.kraus[i] * node.alice, node.bob};
          child.history.push_back(label_of(full, i));
          next.push_back(std::move(child));
        }
        continue;
      }

      // Bob round: mirror each outcome onto Alice.
      const Matrix g = node.alice * c;  // Alice-only branch, original Bob space
      const Matrix rho_g = g * g.adjoint();
      const bool empty = rho_g.cwiseAbs().maxCoeff() == 0.0;
      const Matrix rho_g_inv_sqrt = empty ? Matrix(Matrix::Zero(d_A, d_A)) : pinv_sqrt_psd(rho_g);
      for (std::size_t i = 0; i < full.kraus.size(); ++i) {
        const Matrix& bk = full.kraus[i];
        Node child{node.history, {}, {}};
        child.history.push_back(label_of(full, i));
        const Matrix target = g * (bk * node.bob).transpose();
        const Matrix sigma = target * target.adjoint();
        if (empty || sigma.cwiseAbs().maxCoeff() == 0.0) {
          child.alice = Matrix::Zero(d_A, node.alice.cols());
          child.bob = Matrix::Zero(bk.rows(), dB0);
        } else {
          child.alice = sqrt_psd(sigma) * rho_g_inv_sqrt * node.alice;
          const double scale = sigma.trace().real();
          try {
            child.bob = connect_coefficients(target, child.alice * c, 1e-8 * std::max(scale, 1e-300));
          } catch (const Error& e) {
            fail(ErrorKind::not_reducible,
                 "branch " + join_history(child.history) + " cannot be mirrored: " + e.what());
          }
        }
        next.push_back(std::move(child));
      }
    }
    nodes = std::move(next);
  }

  OneWayProtocol out;
  for (Node& n : nodes) {
    out.alice_kraus.push_back(std::move(n.alice));
    out.bob_unitaries.push_back(std::move(n.bob));
    out.labels.push_back(join_history(n.history));
  }
  return out;
}

}  // namespace entlab
