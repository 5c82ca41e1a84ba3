#include <gtest/gtest.h>

#include "ghostfem/error.hpp"
#include "ghostfem/fields.hpp"
#include "ghostfem/mesh.hpp"

using namespace ghostfem;

TEST(Mesh, Spacing) {
  MeshSpec m;
  EXPECT_DOUBLE_EQ(m.hx(), 0.01);
  EXPECT_DOUBLE_EQ(m.ht(), 0.01);
  EXPECT_EQ(m.nodes_per_level(), 100u);
  EXPECT_EQ(m.dof_count(), 4u * 100u * 101u);
}

TEST(Mesh, TimeMajorIndex) {
  MeshSpec m;
  EXPECT_EQ(global_node_index(m, 5, 2), 205u);
  EXPECT_EQ(global_node_index(m, 100, 0), global_node_index(m, 0, 0));
  EXPECT_EQ(global_node_index(m, -1, 3), global_node_index(m, 99, 3));
  EXPECT_THROW(global_node_index(m, 0, 101), std::out_of_range);
  EXPECT_THROW(global_node_index(m, 0, -1), std::out_of_range);
}

TEST(Mesh, PlanarIndexWrapsBothDirections) {
  MeshSpec m;
  m.dims = Dims::d2p1;
  m.nx = 4;
  m.ny = 3;
  m.nt = 2;
  EXPECT_EQ(global_node_index(m, 1, 2, 1), static_cast<std::size_t>((1 * 3 + 2) * 4 + 1));
  EXPECT_EQ(global_node_index(m, 4, 3, 0), 0u);
}

TEST(Mesh, ValidateNamesInvariant) {
  MeshSpec m;
  m.nx = 0;
  try {
    m.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("nx"), std::string::npos);
  }
  m = MeshSpec{};
  m.nt = 1;
  EXPECT_THROW(m.validate(), ConfigError);
  m = MeshSpec{};
  m.t_slab = 0.0;
  EXPECT_THROW(m.validate(), ConfigError);
  m = MeshSpec{};
  m.dims = Dims::d2p1;
  m.ny = 2;
  EXPECT_THROW(m.validate(), ConfigError);
}

TEST(Mesh, DimsNames) {
  EXPECT_EQ(parse_dims("1+1"), Dims::d1p1);
  EXPECT_EQ(parse_dims("2+1"), Dims::d2p1);
  EXPECT_STREQ(dims_name(Dims::d2p1), "2+1");
  EXPECT_THROW(parse_dims("3+1"), ConfigError);
}

TEST(Fields, ExtractLevel) {
  MeshSpec m;
  m.nx = 3;
  m.nt = 2;
  SlabState s(4 * 6);
  for (int i = 0; i < s.size(); ++i) s[i] = i;
  const TimeSlice t = extract_level(s, m, 1);
  EXPECT_EQ(t.phi, (std::vector<double>{12, 16, 20}));
  EXPECT_EQ(t.v, (std::vector<double>{15, 19, 23}));
  EXPECT_THROW(extract_level(s, m, 2), std::out_of_range);
  EXPECT_THROW(require_slice_matches(TimeSlice::zeros(2), m), SizeMismatch);
}
