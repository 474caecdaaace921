#include <cmath>
#include <fstream>

#include "doctest.h"
#include "wgf/geometry.hpp"

using namespace wgf;

TEST_CASE("sphere mesh: area, normals, validation") {
    const auto mesh = build_sphere(1.0, 1, 16);
    CHECK(mesh.patches.size() == 6);
    CHECK(std::abs(mesh.total_area() - 4.0 * pi) < 1e-10);
    for (const auto& p : mesh.patches)
        for (int k = 0; k < p.nodes(); ++k) {
            CHECK((p.normal[k] - p.x[k].normalized()).norm() < 1e-12);
            CHECK(p.weight[k] > 0.0);
        }
    CHECK_THROWS_AS(build_sphere(0.0, 1, 16), std::domain_error);
    CHECK_THROWS_AS(build_sphere(1.0, 1, 3), ConfigError);
}

TEST_CASE("sphere mesh: refinement changes area spectrally") {
    for (int n : {8, 12}) {
        const double a0 = build_sphere(1.0, 1, n).total_area();
        const double a1 = build_sphere(1.0, 1, n + 4).total_area();
        CHECK(std::abs(a1 - a0) < std::pow(10.0, -n / 2.0));
    }
}

TEST_CASE("sphere mesh is watertight") {
    const auto mesh = build_sphere(1.0, 1, 8);
    const auto audit = audit_watertight(mesh);
    CHECK(audit.boundary_edge_count == 0);
    CHECK(audit.max_matched_gap < 1e-12);
}

TEST_CASE("straight guide with two SIW ends") {
    WindowParams w{2.0, 0.5, 0.0};
    const double a = 0.3;
    const auto mesh = build_circular_guide(a, -2.0, 2.0, SiwEnd::Both, 6, 4, 8, w);
    CHECK(mesh.siws.size() == 2);
    // lateral area of the retained band (eta = 0 keeps all nodes)
    CHECK(std::abs(mesh.total_area() - 2.0 * pi * a * 4.0) < 1e-10);
    // normals radial
    for (const auto& p : mesh.patches)
        for (int k = 0; k < p.nodes(); ++k) {
            Vec3 radial(p.x[k].x(), p.x[k].y(), 0.0);
            CHECK((p.normal[k] - radial.normalized()).norm() < 1e-12);
        }
    // window profile: 1 in the middle band, decaying toward the ends (the
    // tail underflows to exactly 0 very close to the rim)
    for (size_t g = 0; g < mesh.num_nodes(); ++g) {
        CHECK(mesh.W[g] >= 0.0);
        CHECK(mesh.W[g] <= 1.0);
        const double z = mesh.node_x(g).z();
        if (std::abs(z) <= 1.0) CHECK(mesh.W[g] == 1.0);
        if (std::abs(z) > 1.0) CHECK(mesh.W[g] < 1.0);
    }
    // every node claims exactly one SIW half
    for (size_t g = 0; g < mesh.num_nodes(); ++g) {
        const double z = mesh.node_x(g).z();
        CHECK(mesh.siw_label[g] == (z < 0 ? 1 : 2));
    }
    // lateral patches are tagged as the uniform extension of both SIWs
    for (const auto& labels : mesh.guide_labels) {
        REQUIRE(labels.size() == 2);
    }
    CHECK_THROWS_AS(build_circular_guide(a, -1.0, 1.0, SiwEnd::Both, 4, 4, 8, w), ConfigError);
}

TEST_CASE("terminated guide: cap closes the far end") {
    WindowParams w{1.5, 0.5, 0.0};
    const double a = 0.3;
    const auto mesh = build_circular_guide(a, 0.0, 2.0, SiwEnd::Minus, 4, 4, 8, w);
    CHECK(mesh.siws.size() == 1);
    CHECK(mesh.patches.size() == 4 * 4 + 5);
    const double expect = 2.0 * pi * a * 2.0 + 2.0 * pi * a * a;  // tube + hemisphere
    CHECK(std::abs(mesh.total_area() - expect) < 1e-9);
    // W = 1 near the cap, and cap patches are not part of any SIW extension
    for (size_t p = 16; p < mesh.patches.size(); ++p) {
        CHECK(mesh.guide_labels[p].empty());
        for (int k = 0; k < mesh.patches[p].nodes(); ++k)
            CHECK(mesh.W[mesh.patch_offset[p] + k] == 1.0);
    }
    const auto audit = audit_watertight(mesh);
    CHECK(audit.boundary_edge_count == 4);  // only the open SIW rim
    CHECK(audit.max_matched_gap < 1e-12);
}

TEST_CASE("closed cylinder is watertight") {
    WindowParams w{1.0, 0.5, 0.0};
    const auto mesh = build_circular_guide(0.4, 0.0, 1.5, SiwEnd::None, 3, 4, 8, w);
    CHECK(mesh.siws.empty());
    const auto audit = audit_watertight(mesh);
    CHECK(audit.boundary_edge_count == 0);
    CHECK(audit.max_matched_gap < 1e-12);
}

TEST_CASE("bend demo produces watertight adjacency") {
    WindowParams w{1.2, 0.5, 0.0};
    const auto mesh = build_bend_demo(0.3, 1.0, 2.0, 4, 3, 4, 8, w);
    CHECK(mesh.siws.size() == 2);
    const auto audit = audit_watertight(mesh);
    CHECK(audit.boundary_edge_count == 8);  // two open SIW rims
    CHECK(audit.max_matched_gap < 1e-12);
    // incoming and outgoing legs tagged separately, torus untagged
    int in_leg = 0, out_leg = 0, untagged = 0;
    for (const auto& labels : mesh.guide_labels) {
        if (labels == std::vector<int>{1}) ++in_leg;
        else if (labels == std::vector<int>{2}) ++out_leg;
        else if (labels.empty()) ++untagged;
    }
    CHECK(in_leg == 16);
    CHECK(out_leg == 16);
    CHECK(untagged == 12);
}

TEST_CASE("gamma-perp disc: area, orientation, decay radius") {
    SIWDescriptor siw;
    siw.origin = Vec3(0, 0, 1.0);
    siw.axis = Vec3(0, 0, -1);
    siw.radius = 0.3;
    siw.label = 1;
    const double gamma = 4.0;
    const double R_need = gamma_perp_required_radius(0.3, gamma, 1e-12);
    CHECK(R_need == doctest::Approx(0.3 + std::log(1e12) / 4.0));

    const auto disc = build_gamma_perp(siw, 2.0, 0.0, 10, gamma);
    // plane position: cut at axial distance 2 from the origin along -z
    for (const auto& p : disc.patches)
        for (int k = 0; k < p.nodes(); ++k) {
            CHECK(p.x[k].z() == doctest::Approx(-1.0).epsilon(1e-13));
            CHECK(p.normal[k].dot(siw.axis) == doctest::Approx(1.0).epsilon(1e-12));
        }
    CHECK(std::abs(disc.total_area() - pi * R_need * R_need) < 1e-9 * R_need * R_need);
    // transverse mode decay beyond the rim
    CHECK(std::exp(-gamma * (R_need - siw.radius)) <= 1e-12 * (1 + 1e-9));

    CHECK_THROWS_AS(build_gamma_perp(siw, 2.0, 0.5 * R_need, 10, gamma), ConfigError);
    CHECK_THROWS_AS(build_gamma_perp(siw, 2.0, 0.2, 10, gamma), ConfigError);
}

TEST_CASE("disc mesh covers the full circle") {
    const auto disc = build_disc(Vec3(0.5, 0, 0), Vec3::UnitX(), 0.2, 1.0, 8);
    CHECK(std::abs(disc.total_area() - pi) < 1e-10);
    const auto audit = audit_watertight(disc);
    CHECK(audit.boundary_edge_count == 4);  // outer rim
}

TEST_CASE("mesh dump writes one record per node") {
    const auto mesh = build_sphere(1.0, 1, 6);
    const std::string path = "/tmp/wgf_mesh_dump_test.csv";
    mesh_dump_csv(mesh, path);
    std::ifstream in(path);
    std::string line;
    size_t rows = 0;
    std::getline(in, line);
    CHECK(line == "patch,u,v,x,y,z,nx,ny,nz,weight,W,siw");
    while (std::getline(in, line)) ++rows;
    CHECK(rows == mesh.num_nodes());
}
