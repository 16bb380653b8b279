"""Scene assembly: diagram energies, forces, and reference geometries."""

import math

import pytest

from casimir2d.assembly import (
    Scene,
    SceneObject,
    diagram_energy,
    force,
    interaction_I12,
    min_gap,
    parallel_plates_energy_quadrature,
    reflection_series,
    suggest_p_scale,
)
from casimir2d.closedforms import (
    parallel_plate_energy,
    two_halfplates_energy,
)
from casimir2d.diagrams import canonicalize, enumerate_diagrams
from casimir2d.errors import GeometryError, ValidationError
from casimir2d.quadrature import build_grid
from casimir2d.scattering import BoundaryCondition, HalfPlate, InfinitePlate
from casimir2d.translation import FramePose


def _two_halfplate_scene(phi1, phi2, D, bc):
    return Scene(
        (SceneObject(HalfPlate(phi1), FramePose((0.0, 0.0), phi1)),
         SceneObject(HalfPlate(phi2), FramePose((D, 0.0), phi2))),
        bc, mode="edge")


class TestSceneValidation:
    def test_em_rejected(self):
        with pytest.raises(ValidationError):
            _two_halfplate_scene(0.0, 0.0, 1.0, BoundaryCondition.EM2D)

    def test_single_object_rejected(self):
        with pytest.raises(ValidationError):
            Scene((SceneObject(HalfPlate(0.0), FramePose((0.0, 0.0))),),
                  BoundaryCondition.DIRICHLET)

    def test_coincident_origins_rejected(self):
        with pytest.raises(GeometryError):
            Scene(
                (SceneObject(HalfPlate(0.0), FramePose((0.0, 0.0))),
                 SceneObject(HalfPlate(0.3), FramePose((0.0, 0.0), 0.3))),
                BoundaryCondition.DIRICHLET)

    def test_min_gap_and_p_scale(self):
        s = _two_halfplate_scene(0.0, 0.0, 2.0, BoundaryCondition.DIRICHLET)
        assert min_gap(s) == 2.0
        assert suggest_p_scale(s) == 0.25


class TestTwoHalfPlates:
    @pytest.mark.parametrize("phi1,phi2", [(0.4, 0.3),
                                           (math.pi / 8, 3 * math.pi / 8)])
    def test_second_order_matches_closed_form(self, phi1, phi2, edge_grid):
        num = 0.0
        for bc in (BoundaryCondition.DIRICHLET, BoundaryCondition.NEUMANN):
            scene = _two_halfplate_scene(phi1, phi2, 1.0, bc)
            num += diagram_energy(scene, canonicalize((1, 2)), edge_grid)
        cf = (two_halfplates_energy(phi1, phi2, 1.0, 1.0, "D").value
              + two_halfplates_energy(phi1, phi2, 1.0, 1.0, "N").value)
        assert num == pytest.approx(cf, rel=1e-6)

    def test_translation_invariance(self, edge_grid):
        # rigidly shifting the whole scene leaves the energy unchanged
        base = _two_halfplate_scene(0.3, 0.5, 1.0,
                                    BoundaryCondition.DIRICHLET)
        shifted = Scene(
            (SceneObject(HalfPlate(0.3), FramePose((-2.0, 1.5), 0.3)),
             SceneObject(HalfPlate(0.5), FramePose((-1.0, 1.5), 0.5))),
            BoundaryCondition.DIRICHLET, mode="edge")
        e0 = reflection_series(base, 4, edge_grid).total
        e1 = reflection_series(shifted, 4, edge_grid).total
        assert e1 == pytest.approx(e0, rel=1e-12)

    def test_series_orders_decay(self, edge_grid):
        scene = _two_halfplate_scene(0.2, 0.1, 1.0,
                                     BoundaryCondition.DIRICHLET)
        br = reflection_series(scene, 6, edge_grid)
        assert abs(br.by_order[4]) < abs(br.by_order[2])
        assert abs(br.by_order[6]) < abs(br.by_order[4])
        assert br.truncation_estimate == abs(br.by_order[6])
        assert br.total == pytest.approx(sum(br.per_diagram.values()),
                                         rel=1e-14)

    def test_force_matches_finite_difference(self, edge_grid):
        scene = _two_halfplate_scene(0.3, 0.4, 1.0,
                                     BoundaryCondition.DIRICHLET)
        res = force(scene, 2, (1.0, 0.0), grid=edge_grid, N_max=4)
        assert res.cross_check_delta < 1e-5
        # attraction: the force on object 2 points back toward object 1
        assert res.value < 0
        # the [21] diagram alone must reproduce the closed-form gradient
        res2 = force(scene, 2, (1.0, 0.0), grid=edge_grid,
                     diagrams=[canonicalize((1, 2))])
        e = lambda D: (two_halfplates_energy(0.3, 0.4, D, 1.0, "D").value)
        grad = (e(1.001) - e(0.999)) / 0.002
        assert res2.value == pytest.approx(-grad, rel=1e-4)

    def test_mirror_pair_energies_equal(self, edge_grid):
        # three half-plates: [123] and [132] are mirror partners with
        # conjugate traces, so their (real) energies coincide
        scene = Scene(
            (SceneObject(HalfPlate(0.0), FramePose((-1.0, 0.0))),
             SceneObject(HalfPlate(0.0), FramePose((+1.0, 0.0))),
             SceneObject(HalfPlate(0.5 * math.pi), FramePose((0.0, 0.7),
                                                             0.5 * math.pi),
                         plane_normal=(1.0, 0.0))),
            BoundaryCondition.DIRICHLET, mode="edge")
        e123 = diagram_energy(scene, canonicalize((1, 2, 3)), edge_grid)
        e132 = diagram_energy(scene, canonicalize((1, 3, 2)), edge_grid)
        assert e123 == pytest.approx(e132, rel=1e-10)

    def test_diagram_outside_scene_rejected(self, edge_grid):
        scene = _two_halfplate_scene(0.0, 0.0, 1.0,
                                     BoundaryCondition.DIRICHLET)
        with pytest.raises(ValidationError):
            diagram_energy(scene, canonicalize((1, 3)), edge_grid)


class TestWallCancellation:
    @pytest.mark.parametrize("bc", ["D", "N"])
    def test_infinite_wall_blocks_pairwise_term(self, bc, edge_grid):
        # an infinite plate between two half-plates: [321] cancels [21]
        scene = Scene(
            (SceneObject(HalfPlate(0.0), FramePose((-1.0, 0.0))),
             SceneObject(HalfPlate(0.0), FramePose((+1.0, 0.0))),
             SceneObject(InfinitePlate(), FramePose((0.0, 0.0)))),
            BoundaryCondition.parse(bc), mode="edge")
        e12 = diagram_energy(scene, canonicalize((1, 2)), edge_grid)
        e123 = diagram_energy(scene, canonicalize((1, 2, 3)), edge_grid)
        assert abs(e12 + e123) < 1e-8 * abs(e12)

    def test_higher_order_pair_also_cancels(self, edge_grid):
        scene = Scene(
            (SceneObject(HalfPlate(0.0), FramePose((-1.0, 0.0))),
             SceneObject(HalfPlate(0.0), FramePose((+1.0, 0.0))),
             SceneObject(InfinitePlate(), FramePose((0.0, 0.0)))),
            BoundaryCondition.DIRICHLET, mode="edge")
        e132 = diagram_energy(scene, canonicalize((1, 3, 2)), edge_grid)
        e1323 = diagram_energy(scene, canonicalize((1, 3, 2, 3)), edge_grid)
        assert abs(e132 + e1323) < 1e-8 * abs(e132)


class TestParallelPlates:
    def test_d3_matches_zeta_form(self, edge_grid):
        num = parallel_plates_energy_quadrature(1.0, "D", 3, edge_grid)
        cf = parallel_plate_energy(3, 1.0, 1.0, "D").value
        assert num == pytest.approx(cf, rel=1e-7)

    def test_d2_matches_zeta_form(self, kappa_grid):
        num = parallel_plates_energy_quadrature(1.0, "D", 2, kappa_grid)
        cf = parallel_plate_energy(2, 1.0, 1.0, "D").value
        assert num == pytest.approx(cf, rel=1e-6)

    def test_em_is_d_plus_n(self, edge_grid):
        em = parallel_plates_energy_quadrature(0.8, "EM", 3, edge_grid)
        d = parallel_plates_energy_quadrature(0.8, "D", 3, edge_grid)
        n = parallel_plates_energy_quadrature(0.8, "N", 3, edge_grid)
        assert em == pytest.approx(d + n, rel=1e-14)

    def test_truncated_orders_match_per_order_forms(self, edge_grid):
        from casimir2d.closedforms import parallel_plate_per_order
        full = parallel_plates_energy_quadrature(1.0, "D", 3, edge_grid, 3)
        cf = sum(parallel_plate_per_order(3, 1.0, 1.0, "D", n).value
                 for n in (1, 2, 3))
        assert full == pytest.approx(cf, rel=1e-7)

    def test_validation(self, edge_grid):
        with pytest.raises(ValidationError):
            parallel_plates_energy_quadrature(-1.0, "D", 3, edge_grid)
        with pytest.raises(ValidationError):
            parallel_plates_energy_quadrature(1.0, "D", 4, edge_grid)


class TestInteractionI12:
    def test_free_two_body_reference(self, edge_grid):
        # with only the two facing plates, I12 equals -d^2 E / d d1 d d2
        # of the two-body series, checked by double finite differences
        def energy(d1, d2):
            s = Scene(
                (SceneObject(HalfPlate(0.0), FramePose((-d1, 0.0))),
                 SceneObject(HalfPlate(0.0), FramePose((+d2, 0.0)))),
                BoundaryCondition.DIRICHLET, mode="edge")
            return reflection_series(s, 4, edge_grid).total

        s0 = Scene(
            (SceneObject(HalfPlate(0.0), FramePose((-1.0, 0.0))),
             SceneObject(HalfPlate(0.0), FramePose((+1.0, 0.0)))),
            BoundaryCondition.DIRICHLET, mode="edge")
        val = interaction_I12(s0, grid=edge_grid, N_max=4)
        h = 1e-3
        fd = -(energy(1 + h, 1 + h) - energy(1 + h, 1 - h)
               - energy(1 - h, 1 + h) + energy(1 - h, 1 - h)) / (4 * h * h)
        assert val == pytest.approx(fd, rel=1e-5)
