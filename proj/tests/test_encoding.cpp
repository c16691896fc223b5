// Copyright 2026 The Symgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "testutil.hpp"

using namespace symgate;
using testutil::eye;

TEST_CASE("two-qubit code columns are the single-excitation states") {
  SpinSystem sys(2);
  LogicalCode code = code_two_qubit(sys, 0, 1);
  REQUIRE(code.n_physical == 2);
  REQUIRE(code.k_logical == 1);
  REQUIRE(code.isometry.rows() == 4);
  REQUIRE(code.isometry.cols() == 2);
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 2);
  expected(1, 0) = 1.0;  // |0_L> = |01>
  expected(2, 1) = 1.0;  // |1_L> = |10>
  REQUIRE((code.isometry - expected).norm() == 0.0);
  REQUIRE(code.codeword_labels == std::vector<std::string>{"0", "1"});
  REQUIRE(code.provenance == "two_qubit");
  REQUIRE(code.sites == std::vector<int>{0, 1});

  // reversed roles swap the columns
  LogicalCode flipped = code_two_qubit(sys, 1, 0);
  REQUIRE((flipped.isometry.col(0) - code.isometry.col(1)).norm() == 0.0);
}

TEST_CASE("two-qubit codewords carry zero total Sz") {
  SpinSystem sys(2);
  LogicalCode code = code_two_qubit(sys, 0, 1);
  SquareMatrix sz = total_spin_component(sys, Axis::Z).matrix;
  REQUIRE((sz * code.isometry).norm() <= 1e-12);
}

TEST_CASE("codes are exact isometries") {
  std::vector<LogicalCode> codes;
  codes.push_back(code_two_qubit(SpinSystem(2), 0, 1));
  codes.push_back(code_three_qubit(SpinSystem(3)));
  codes.push_back(code_four_qubit(SpinSystem(4)));
  for (const LogicalCode& code : codes) {
    Eigen::MatrixXcd gram = code.isometry.adjoint() * code.isometry;
    REQUIRE((gram - eye(int(code.isometry.cols()))).norm() <= 1e-12);
    REQUIRE(code.isometry.cols() == (1 << code.k_logical));
  }
}

TEST_CASE("three-qubit codewords live in the S=1/2, Sz=+1/2 sector") {
  SpinSystem sys(3);
  LogicalCode code = code_three_qubit(sys);
  REQUIRE(code.n_physical == 3);
  REQUIRE(code.k_logical == 1);
  SquareMatrix s2 = total_spin_squared(sys).matrix;
  SquareMatrix sz = total_spin_component(sys, Axis::Z).matrix;
  REQUIRE((s2 * code.isometry - 0.75 * code.isometry).norm() <= 1e-10);
  REQUIRE((sz * code.isometry - 0.5 * code.isometry).norm() <= 1e-10);

  // equivalently: the S=3/2 projector annihilates the code.
  // P_{3/2} = (S^2 - 3/4) / (15/4 - 3/4)
  SquareMatrix proj = (s2 - 0.75 * eye(8)) / 3.0;
  REQUIRE((proj * code.isometry).norm() <= 1e-10);
  REQUIRE(testutil::validation_code([&] {
            code_three_qubit(SpinSystem(2));
          }) == "E_RANGE");
}

TEST_CASE("four-qubit codewords are singlets") {
  SpinSystem sys(4);
  LogicalCode code = code_four_qubit(sys);
  REQUIRE(code.n_physical == 4);
  REQUIRE(code.k_logical == 1);
  for (Axis ax : {Axis::X, Axis::Y, Axis::Z}) {
    SquareMatrix s = total_spin_component(sys, ax).matrix;
    REQUIRE((s * code.isometry).norm() <= 1e-10);
  }
  REQUIRE((total_spin_squared(sys).matrix * code.isometry).norm() <= 1e-10);
  REQUIRE(testutil::validation_code([&] {
            code_four_qubit(SpinSystem(3));
          }) == "E_RANGE");
}

TEST_CASE("exchange never leaks the decoherence-free codes") {
  for (int n : {3, 4}) {
    SpinSystem sys(n);
    LogicalCode code =
        n == 3 ? code_three_qubit(sys) : code_four_qubit(sys);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        SquareMatrix u = expm_hermitian(
            materialize(sys, heisenberg_term(i, j, 1.0)), 0.9);
        REQUIRE(leakage(u, code).leakage_norm <= 1e-10);
      }
  }
}

TEST_CASE("gauge fixing is reproducible") {
  LogicalCode a = code_three_qubit(SpinSystem(3));
  LogicalCode b = code_three_qubit(SpinSystem(3));
  REQUIRE((a.isometry - b.isometry).norm() == 0.0);
  // first nonzero amplitude of each codeword is real positive
  for (int c = 0; c < int(a.isometry.cols()); ++c) {
    for (int r = 0; r < int(a.isometry.rows()); ++r) {
      Complex amp = a.isometry(r, c);
      if (std::abs(amp) > 1e-8) {
        REQUIRE(amp.imag() == Catch::Approx(0.0).margin(1e-12));
        REQUIRE(amp.real() > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("with_sites rebases a block placement") {
  LogicalCode base = code_two_qubit(SpinSystem(2), 0, 1);
  LogicalCode code = with_sites(base, {2, 3});
  REQUIRE(code.sites == std::vector<int>{2, 3});
  REQUIRE(code.provenance == "two_qubit");
  REQUIRE((code.isometry - base.isometry).norm() == 0.0);
  REQUIRE(testutil::validation_code([&] {
            with_sites(base, {0, 1, 2});
          }) == "E_SITES");
}

TEST_CASE("composing two pair codes spans the frozen-weight basis") {
  SpinSystem sys(4);
  LogicalCode left = code_two_qubit(SpinSystem(2), 0, 1);
  LogicalCode right = with_sites(left, {2, 3});
  LogicalCode code = compose_codes({left, right}, sys);
  REQUIRE(code.n_physical == 4);
  REQUIRE(code.k_logical == 2);
  REQUIRE(code.isometry.cols() == 4);
  REQUIRE(code.provenance == "custom");
  REQUIRE(code.codeword_labels ==
          std::vector<std::string>{"00", "01", "10", "11"});
  // physical states |0101>, |0110>, |1001>, |1010> in logical order
  auto col_state = [&](int c) {
    int best = -1;
    for (int r = 0; r < 16; ++r)
      if (std::abs(code.isometry(r, c)) > 0.5) best = r;
    return best;
  };
  REQUIRE(col_state(0) == 0b0101);
  REQUIRE(col_state(1) == 0b0110);
  REQUIRE(col_state(2) == 0b1001);
  REQUIRE(col_state(3) == 0b1010);

  SquareMatrix sz = total_spin_component(sys, Axis::Z).matrix;
  REQUIRE((sz * code.isometry).norm() <= 1e-12);
}

TEST_CASE("composition works regardless of block interleaving") {
  // blocks on {0,2} and {1,3}: the scatter must respect the site map
  SpinSystem sys(4);
  LogicalCode base = code_two_qubit(SpinSystem(2), 0, 1);
  LogicalCode code = compose_codes(
      {with_sites(base, {0, 2}), with_sites(base, {1, 3})}, sys);
  REQUIRE(code.k_logical == 2);
  // first codeword: block one puts |01> on sites (0,2), block two puts
  // |01> on sites (1,3), so the physical state is |0011>
  int best = -1;
  for (int r = 0; r < 16; ++r)
    if (std::abs(code.isometry(r, 0)) > 0.5) best = r;
  REQUIRE(best == 0b0011);
  Eigen::MatrixXcd gram = code.isometry.adjoint() * code.isometry;
  REQUIRE((gram - eye(4)).norm() <= 1e-12);
}

TEST_CASE("composition rejects overlap, gaps, and stray sites") {
  LogicalCode base = code_two_qubit(SpinSystem(2), 0, 1);
  REQUIRE(testutil::validation_code([&] {
            compose_codes({base, with_sites(base, {1, 2})}, SpinSystem(3));
          }) == "E_OVERLAP");
  REQUIRE(testutil::validation_code([&] {
            compose_codes({base}, SpinSystem(3));
          }) == "E_COVERAGE");
  REQUIRE(testutil::validation_code([&] {
            compose_codes({with_sites(base, {0, 4})}, SpinSystem(2));
          }) == "E_RANGE");
  REQUIRE(testutil::validation_code([&] {
            compose_codes({}, SpinSystem(2));
          }) == "E_SCHEMA");
}

TEST_CASE("encoded_target validates logical dimension") {
  LogicalCode code = code_two_qubit(SpinSystem(2), 0, 1);
  SquareMatrix x = testutil::pauli_x();
  REQUIRE((encoded_target(code, x) - x).norm() == 0.0);
  REQUIRE_THROWS_AS(encoded_target(code, SquareMatrix(eye(4))),
                    DimensionError);
}

TEST_CASE("embedded logical X swaps the physical occupations") {
  LogicalCode code = code_two_qubit(SpinSystem(2), 0, 1);
  SquareMatrix embedded = embed_logical(code, testutil::pauli_x());
  // acts as |01><10| + |10><01| on the code, zero elsewhere
  SquareMatrix expected = SquareMatrix::Zero(4, 4);
  expected(1, 2) = 1.0;
  expected(2, 1) = 1.0;
  REQUIRE((embedded - expected).norm() <= 1e-12);
}

TEST_CASE("leakage: symmetric evolutions stay in the code") {
  SpinSystem sys(2);
  LogicalCode code = code_two_qubit(sys, 0, 1);
  SquareMatrix u =
      expm_hermitian(materialize(sys, heisenberg_term(0, 1, 0.8)), 1.3);
  auto rep = leakage(u, code);
  REQUIRE(rep.leakage_norm <= 1e-10);
  REQUIRE(!rep.subspace_fidelity.has_value());
}

TEST_CASE("leakage: cross-block exchange exits a composed code") {
  SpinSystem sys(4);
  LogicalCode base = code_two_qubit(SpinSystem(2), 0, 1);
  LogicalCode code =
      compose_codes({base, with_sites(base, {2, 3})}, sys);
  SquareMatrix u =
      expm_hermitian(materialize(sys, heisenberg_term(1, 2, 1.0)), 0.7);
  REQUIRE(leakage(u, code).leakage_norm > 0.1);
}

TEST_CASE("leakage reports fidelity against a supplied target") {
  SpinSystem sys(2);
  LogicalCode code = code_two_qubit(sys, 0, 1);
  // restricted exchange acts as 2 X_L - I; at t = pi/4 the block equals
  // X_L up to a global phase
  SquareMatrix u =
      expm_hermitian(materialize(sys, heisenberg_term(0, 1, 1.0)), M_PI / 4);
  auto rep = leakage(u, code, testutil::pauli_x());
  REQUIRE(rep.leakage_norm <= 1e-10);
  REQUIRE(rep.subspace_fidelity.has_value());
  REQUIRE(*rep.subspace_fidelity == Catch::Approx(1.0).margin(1e-10));

  auto miss = leakage(u, code, testutil::pauli_z());
  REQUIRE(*miss.subspace_fidelity < 0.6);
}

TEST_CASE("block-local evolution restricts to a tensor factor") {
  SpinSystem sys(4);
  LogicalCode base = code_two_qubit(SpinSystem(2), 0, 1);
  LogicalCode code =
      compose_codes({base, with_sites(base, {2, 3})}, sys);
  SquareMatrix h = materialize(sys, heisenberg_term(0, 1, 1.0));
  auto r = restrict_to(h, code.isometry);
  REQUIRE(r.leakage <= 1e-10);
  // the restriction is (2 X - I) on the first logical qubit
  SquareMatrix single(2, 2);
  single << -1, 2, 2, -1;
  SquareMatrix expected = kron(single, eye(2));
  REQUIRE((r.matrix - expected).norm() <= 1e-10);

  // embedded evolution agrees with exponentiating the restriction
  double t = 0.37;
  SquareMatrix u = expm_hermitian(h, t);
  auto ru = restrict_to(u, code.isometry);
  REQUIRE(ru.leakage <= 1e-10);
  REQUIRE((ru.matrix - expm_hermitian(expected, t)).norm() <= 1e-9);
}

TEST_CASE("leak-free unitaries restrict to unitaries") {
  std::mt19937_64 rng(7);
  SpinSystem sys(3);
  LogicalCode code = code_three_qubit(sys);
  std::uniform_real_distribution<double> dur(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    SquareMatrix u = eye(8);
    for (int p = 0; p < 4; ++p) {
      int i = int(rng() % 3);
      int j = (i + 1 + int(rng() % 2)) % 3;
      if (i > j) std::swap(i, j);
      u = expm_hermitian(materialize(sys, heisenberg_term(i, j, 1.0)),
                         dur(rng)) *
          u;
    }
    auto r = restrict_to(u, code.isometry);
    REQUIRE(r.leakage <= 1e-9);
    REQUIRE(unitarity_deviation(r.matrix) <= 1e-9);
  }
}
