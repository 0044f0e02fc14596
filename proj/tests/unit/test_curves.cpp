#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "twistsel/curves.hpp"

using namespace twistsel;

namespace {

struct Golden {
  std::string input, kind, shape;
  std::size_t vertices;
};

std::vector<Golden> load_golden() {
  std::ifstream in(std::string(TWISTSEL_TEST_DATA) + "/classification.tsv");
  std::vector<Golden> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    Golden g;
    std::string n;
    std::getline(ss, g.input, '\t');
    std::getline(ss, g.kind, '\t');
    std::getline(ss, g.shape, '\t');
    std::getline(ss, n, '\t');
    g.vertices = std::stoul(n);
    out.push_back(g);
  }
  return out;
}

std::string shape_name(GraphShape s) {
  switch (s) {
    case GraphShape::Single: return "single";
    case GraphShape::Path2: return "path2";
    case GraphShape::Star4: return "star4";
    case GraphShape::Six: return "six";
    case GraphShape::Eight: return "eight";
  }
  return "?";
}

}  // namespace

TEST(Golden, ClassificationCorpus) {
  auto golden = load_golden();
  ASSERT_GE(golden.size(), 20u);
  std::set<std::string> kinds, shapes;
  for (const auto& g : golden) {
    auto in = parse_curve(g.input);
    std::string kind = "I", shape = "single";
    std::size_t n = 1;
    if (in.model) {
      kind = to_string(classify_case(*in.model).kind);
      auto G = build_isogeny_graph(*in.model);
      shape = shape_name(G.shape);
      n = G.vertices.size();
    }
    EXPECT_EQ(kind, g.kind) << g.input;
    EXPECT_EQ(shape, g.shape) << g.input;
    EXPECT_EQ(n, g.vertices) << g.input;
    kinds.insert(kind);
    shapes.insert(shape);
  }
  EXPECT_EQ(kinds.size(), 5u);
  EXPECT_EQ(shapes.size(), 5u);
}

TEST(Classify, CaseVExampleKernels) {
  CurveModel E(-34, 225);
  auto label = classify_case(E);
  ASSERT_EQ(label.kind, Case::V);
  ASSERT_EQ(label.balanced.size(), 2u);
  // squarefree parts of the kernel-model B: 225, 400, -144 for kernels at 0, 9, 25
  std::set<long> B;
  for (auto& phi : enumerate_two_isogenies(E)) B.insert(phi.kernel_model.B.get_si());
  EXPECT_EQ(B, (std::set<long>{225, 400, -144}));
  for (auto& phi : label.balanced) {
    mpz_class d = phi.kernel_model.A * phi.kernel_model.A - 4 * phi.kernel_model.B;
    EXPECT_EQ(squarefree_kernel(d), squarefree_kernel(phi.kernel_model.B));
  }
}

TEST(Classify, ZTwoCaseIV) {
  CurveModel E(5, 5);
  EXPECT_FALSE(E.full_two_torsion());
  auto label = classify_case(E);
  EXPECT_EQ(label.kind, Case::IV);
  EXPECT_TRUE(label.two_vertex_case_iv);
  ASSERT_EQ(label.balanced.size(), 1u);
}

TEST(Isogeny, TargetFormulaAndDualComposition) {
  const std::pair<long, long> curves[] = {{-34, 225}, {5, 5}, {0, -1}, {3, 1}, {-17, 16}, {14, 64}, {-30, 7}};
  for (auto [a, b] : curves) {
    CurveModel E(a, b);
    for (auto& phi : enumerate_two_isogenies(E)) {
      const auto& K = phi.kernel_model;
      EXPECT_EQ(phi.target.A, -2 * K.A);
      EXPECT_EQ(phi.target.B, K.A * K.A - 4 * K.B);
      EXPECT_TRUE(isomorphic(phi.kernel_model, E));
      // the dual returns to the kernel model; the raw formula gives (4A', 16B')
      auto dual = phi.dual();
      EXPECT_EQ(dual.target, K) << E.to_string();
      EXPECT_EQ(dual.source, phi.target);
      EXPECT_TRUE(isomorphic(CurveModel(-2 * phi.target.A, phi.target.A * phi.target.A - 4 * phi.target.B), E));
      EXPECT_EQ(phi.balanced, dual.balanced);
    }
  }
}

TEST(Isogeny, EnumerationMatchesTorsion) {
  EXPECT_EQ(enumerate_two_isogenies(CurveModel(5, 5)).size(), 1u);
  EXPECT_EQ(enumerate_two_isogenies(CurveModel(-34, 225)).size(), 3u);
  EXPECT_EQ(CurveModel(-34, 225).two_torsion_x().size(), 3u);
}

TEST(Twist, ScalesCoefficients) {
  CurveModel E(5, 5);
  auto T = twist(E, mpz_class(-3));
  EXPECT_EQ(T.A, -15);
  EXPECT_EQ(T.B, 45);
  EXPECT_EQ(classify_case(T).kind, Case::IV);  // the case is a twist invariant
  for (long d : {-7L, -1L, 2L, 3L, 5L, 6L, 10L}) {
    auto Ed = twist(CurveModel(-34, 225), mpz_class(d));
    EXPECT_EQ(classify_case(Ed).kind, Case::V);
    EXPECT_EQ(build_isogeny_graph(Ed).vertices.size(), 8u);
  }
}

TEST(Models, IsomorphismAndReduction) {
  CurveModel E(5, 5);
  CurveModel scaled(5 * 4, 5 * 16);
  EXPECT_TRUE(isomorphic(E, scaled));
  EXPECT_EQ(reduce_model(scaled), E);
  EXPECT_FALSE(isomorphic(E, twist(E, mpz_class(2))));
  EXPECT_TRUE(isomorphic(CurveModel(0, -1), CurveModel(0, -4)) == false);
  EXPECT_TRUE(isomorphic(CurveModel(0, -1), CurveModel(0, -16)));
}

TEST(Graph, DegreesByShape) {
  auto check = [](CurveModel E, std::size_t nv, std::size_t deg3) {
    auto G = build_isogeny_graph(E);
    EXPECT_EQ(G.vertices.size(), nv) << E.to_string();
    auto deg = G.degrees();
    EXPECT_EQ(static_cast<std::size_t>(std::count(deg.begin(), deg.end(), 3)), deg3) << E.to_string();
    EXPECT_EQ(G.edges.size(), nv - 1);  // always a tree
    EXPECT_TRUE(isomorphic(G.vertices[0], E));
  };
  check(CurveModel(5, 5), 2, 0);
  check(CurveModel(0, -1), 4, 1);
  check(CurveModel(-28, 4), 6, 2);
  check(CurveModel(-34, 225), 8, 3);
  EXPECT_EQ(single_vertex_graph().shape, GraphShape::Single);
}

TEST(Parse, AllInputForms) {
  auto a = parse_curve("-34 225");
  ASSERT_TRUE(a.model);
  EXPECT_EQ(a.model->A, -34);
  auto r = parse_curve("roots: 9 25");
  ASSERT_TRUE(r.model);
  EXPECT_EQ(r.model->A, -34);
  EXPECT_EQ(r.model->B, 225);
  auto c = parse_curve("cubic: 0 0 -2");
  EXPECT_FALSE(c.model);
  ASSERT_TRUE(c.cubic);
  auto c2 = parse_curve("cubic: 0 0 1");  // x^3 + 1 has the root -1
  ASSERT_TRUE(c2.model);
  EXPECT_EQ(classify_case(*c2.model).kind, Case::II);
  EXPECT_THROW(parse_curve("1 2 3 4 5"), std::exception);
  EXPECT_THROW(parse_curve("0 0"), std::exception);
  EXPECT_THROW(parse_curve("2 1"), std::exception);  // A^2 = 4B is singular
}
