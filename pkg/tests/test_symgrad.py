"""Tests for the planar grid engine."""

import numpy as np
import pytest

from src.norms import NormSpec
from src.rearrangement import DecreasingProfile
from src.symgrad import (
    FieldFamily,
    GridDomain,
    RigidMotion2D,
    VectorField2D,
    bump_specs,
    field_profile,
    level_region,
    log_cusp,
    maximal_function,
    partition_of_unity,
    poincare_check,
    polynomial_field,
    read_field_csv,
    rearrangement_bound_profile,
    rigid_project,
    sobolev_poincare_check,
    symmetric_gradient,
    truncate,
    truncate_grad_only,
    verify_orlicz_modular,
    verify_sobolev_2d,
    weak_type_ratio,
    whitney_cover,
    write_field_csv,
)
from src.symgrad.truncation import bump
from src.utils.exceptions import DomainError, GridExtentError, RankError, ValidationError
from src.young import PowerYoung


@pytest.fixture
def square():
    """Unit square with 32 x 32 cells."""
    return GridDomain.square(32)


@pytest.fixture
def centred_bump(square):
    """Smooth bump of width 0.2 around the centre."""
    return VectorField2D.from_function(
        square, lambda x, y: (bump(np.hypot(x - 0.5, y - 0.5) / 0.2), 0.5 * bump(np.hypot(x - 0.5, y - 0.5) / 0.2)))


def disc(domain, radius):
    """Cells whose centres lie within `radius` of the grid centre."""
    x, y = domain.centers()
    return np.hypot(x - 0.5, y - 0.5) < radius


class TestGridDomain:
    """Test cell domains."""

    def test_square(self):
        """Test measures and interior of a square grid."""
        domain = GridDomain.square(8)
        assert domain.measure == pytest.approx(1.0)
        assert domain.cell_measure == pytest.approx(1.0 / 64)
        assert np.count_nonzero(domain.interior()) == 36
        assert domain.components() == 1

    def test_annulus(self):
        """Test the annulus is a proper connected subset."""
        domain = GridDomain.annulus(32)
        assert 0 < np.count_nonzero(domain.mask) < 32 * 32
        assert domain.components() == 1
        with pytest.raises(ValidationError, match="Invalid annulus radii"):
            GridDomain.annulus(32, 0.8, 0.5)

    def test_from_dict(self, tmp_path):
        """Test domain descriptions and their errors."""
        domain = GridDomain.from_dict({'nx': 16, 'h': 0.0625})
        assert domain.shape == (16, 16)
        with pytest.raises(ValidationError, match="Invalid domain description"):
            GridDomain.from_dict({'h': 0.1})
        with pytest.raises(ValidationError, match="grid must be square"):
            GridDomain.from_dict({'nx': 16, 'ny': 8, 'h': 0.1, 'mask': 'annulus'})
        with pytest.raises(ValidationError, match="Mask file not found"):
            GridDomain.from_dict({'nx': 4, 'h': 0.25, 'mask': 'missing.csv'}, tmp_path)
        with pytest.raises(ValidationError, match="Domain file not found"):
            GridDomain.from_json(tmp_path / 'missing.json')

    def test_mask_file(self, tmp_path):
        """Test masks read from 0/1 rows."""
        (tmp_path / 'mask.csv').write_text("1,1,0\n1,1,0\n0,0,0\n")
        domain = GridDomain.from_dict({'nx': 3, 'h': 1.0, 'mask': 'mask.csv'}, tmp_path)
        assert np.count_nonzero(domain.mask) == 4

    def test_box_mask(self):
        """Test blocks must fit in the grid."""
        domain = GridDomain.square(8)
        assert np.count_nonzero(domain.box_mask(2, 2, 3)) == 9
        with pytest.raises(ValidationError, match="Invalid block"):
            domain.box_mask(6, 6, 3)


class TestSymmetricGradient:
    """Test finite-difference symmetric gradients."""

    def test_rigid_motion(self, square):
        """Test rigid motions have vanishing symmetric gradient."""
        eps = symmetric_gradient(RigidMotion2D((0.3, -1.0), 2.0).on(square))
        assert eps.sup_norm() < 1e-10

    def test_linear_fields(self, square):
        """Test stretching and shear."""
        stretch = symmetric_gradient(polynomial_field(square, [[0.0, 1.0], [0.0]]))
        np.testing.assert_allclose(stretch.e11, 1.0)
        np.testing.assert_allclose(stretch.e12, 0.0, atol=1e-12)
        shear = symmetric_gradient(polynomial_field(square, [[0.0, 0.0, 1.0], [0.0, 1.0]]))
        np.testing.assert_allclose(shear.e12, 1.0)
        np.testing.assert_allclose(shear.frobenius(), np.sqrt(2.0))

    def test_no_interior(self):
        """Test a grid without interior cells is rejected."""
        domain = GridDomain.square(2)
        with pytest.raises(DomainError, match="no interior cells"):
            symmetric_gradient(VectorField2D.zeros(domain))


class TestRigidProjection:
    """Test least-squares rigid projections and the Poincare ratio."""

    def test_recovers_motion(self, square):
        """Test projecting a rigid motion returns it."""
        motion = RigidMotion2D((0.3, -1.0), 2.0)
        assert rigid_project(motion.on(square)).distance(motion) < 1e-10

    def test_collinear(self, square):
        """Test a single row of cells is degenerate."""
        row = np.zeros(square.shape, dtype=bool)
        row[:, 3] = True
        with pytest.raises(RankError, match="Degenerate subdomain"):
            rigid_project(RigidMotion2D().on(square), row)

    def test_poincare(self, square):
        """Test the ratio on rigid and polynomial fields."""
        block = square.box_mask(4, 4, 16)
        rigid = poincare_check(RigidMotion2D((1.0, 0.0), 1.0).on(square), block)
        assert rigid.rigid_field and rigid.ratio is None
        curved = poincare_check(polynomial_field(square, [[0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.0, 0.0, 0.0, 1.0]]),
                                block)
        assert curved.ratio is not None and 0.0 < curved.ratio < 10.0

    def test_block_outside(self):
        """Test blocks must lie in the mask."""
        domain = GridDomain.annulus(32)
        with pytest.raises(ValidationError, match="inside the domain mask"):
            poincare_check(VectorField2D.zeros(domain), domain.box_mask(12, 12, 8))


class TestMaximalFunction:
    """Test the dyadic-scale maximal function."""

    def test_dominates(self, centred_bump):
        """Test M f >= |f| and constants are fixed."""
        values = centred_bump.magnitude()
        assert np.all(maximal_function(values) >= values)
        np.testing.assert_allclose(maximal_function(np.full((16, 16), 2.0)), 2.0)

    def test_single_cell(self):
        """Test the maximal function of a point mass decays with distance."""
        values = np.zeros((16, 16))
        values[8, 8] = 1.0
        result = maximal_function(values)
        assert result[8, 8] == 1.0
        assert result[0, 0] < result[7, 7] < result[8, 8]

    def test_invalid_input(self):
        """Test non-planar input is rejected."""
        with pytest.raises(ValidationError, match="Must be 2"):
            maximal_function(np.ones(4))

    def test_weak_type(self, square, centred_bump):
        """Test the weak-type ratio stays bounded."""
        ratio = weak_type_ratio(centred_bump.magnitude(), square)
        assert 0.0 < ratio < 25.0
        assert weak_type_ratio(np.zeros(square.shape), square) == 0.0


class TestWhitney:
    """Test Whitney covers of level sets."""

    def test_disc_cover(self, square):
        """Test a disc is covered exactly once by squares obeying the distance bounds."""
        cover = whitney_cover(square, disc(square, 0.3))
        assert len(cover) > 0
        assert cover.checks.disjoint
        assert cover.checks.covers
        assert cover.checks.distance_bounds
        assert cover.checks.neighbour_ratio and cover.checks.passed
        assert set(cover.checks.to_dict()) >= {'disjoint', 'covers', 'passed'}

    def test_invalid_regions(self, square):
        """Test the full grid and malformed regions are rejected."""
        with pytest.raises(DomainError, match="no boundary"):
            whitney_cover(square, np.ones(square.shape, dtype=bool))
        with pytest.raises(ValidationError, match="Invalid region shape"):
            whitney_cover(square, np.ones((4, 4), dtype=bool))


class TestTruncation:
    """Test truncations on maximal-function level sets."""

    def test_bump_profile(self):
        """Test the one-dimensional bump."""
        np.testing.assert_allclose(bump(np.array([0.0, 1.0, 2.0])), [1.0, 0.0, 0.0])

    def test_partition_of_unity(self, square):
        """Test the partition sums to one on O and respects the dilated squares."""
        region = disc(square, 0.3)
        partition = partition_of_unity(whitney_cover(square, region))
        total = partition.sum()
        np.testing.assert_allclose(total[region], 1.0)
        np.testing.assert_allclose(total[~region], 0.0)
        assert partition.support_inside()
        assert np.isfinite(partition.gradient_bound())

    def test_truncate(self, centred_bump):
        """Test T u agrees with u off O and is controlled on O."""
        eps = symmetric_gradient(centred_bump)
        result = truncate(centred_bump, 0.5 * centred_bump.sup_norm(), 0.5 * eps.sup_norm())
        assert np.any(result.region)
        unchanged = result.unchanged
        np.testing.assert_array_equal(result.field.u1[unchanged], centred_bump.u1[unchanged])
        assert np.isfinite(result.theta_constant) and np.isfinite(result.lambda_constant)
        assert len(result.motions) == len(result.cover)

    def test_empty_level_set(self, centred_bump):
        """Test high levels leave the field untouched."""
        result = truncate(centred_bump, 10.0, 1e6)
        assert result.cover is None
        assert result.field is centred_bump

    def test_grad_only(self, centred_bump):
        """Test the gradient-only truncation skips the field level."""
        lam = 0.5 * symmetric_gradient(centred_bump).sup_norm()
        result = truncate_grad_only(centred_bump, lam)
        assert result.theta is None and result.theta_constant is None
        np.testing.assert_array_equal(result.region, level_region(centred_bump, None, lam))

    def test_touches_edge(self, square):
        """Test a level set reaching the edge asks for a larger grid."""
        constant = polynomial_field(square, [[1.0], [0.0]])
        with pytest.raises(GridExtentError, match="enlarge the grid"):
            truncate(constant, 0.5, 1.0)

    def test_invalid_levels(self, centred_bump):
        """Test levels must be positive."""
        with pytest.raises(ValidationError):
            truncate(centred_bump, 0.0, 1.0)


class TestFields:
    """Test test-field families and field files."""

    def test_bump_specs(self):
        """Test seeded specs are reproducible and stay off the edges."""
        specs = bump_specs(5, seed=3)
        assert specs == bump_specs(5, seed=3)
        for spec in specs:
            assert 2 * spec.width <= spec.center[0] <= 1 - 2 * spec.width
        with pytest.raises(ValidationError, match="Invalid count"):
            bump_specs(0, seed=3)

    def test_log_cusp(self):
        """Test the cusp is capped at its level."""
        domain = GridDomain.square(64)
        assert log_cusp(domain, 2.0).sup_norm() == pytest.approx(2.0)
        with pytest.raises(ValidationError):
            log_cusp(domain, 0.0)

    def test_polynomial_validation(self, square):
        """Test coefficient rows are checked."""
        with pytest.raises(ValidationError, match="Invalid polynomial coefficients"):
            polynomial_field(square, [[1.0] * 7, [0.0]])

    def test_family(self):
        """Test family validation and labels."""
        family = FieldFamily(kind='log-cusp', resolutions=(16,))
        assert family.labels() == [1.0, 2.0, 3.0]
        assert len(family.fields(16)) == 3
        with pytest.raises(ValidationError, match="Invalid field family kind"):
            FieldFamily(kind='wave')
        with pytest.raises(ValidationError, match="Invalid resolutions"):
            FieldFamily(resolutions=(4,))

    def test_csv(self, tmp_path, square, centred_bump):
        """Test field files and their errors."""
        path = tmp_path / 'u.csv'
        write_field_csv(centred_bump, path)
        restored = read_field_csv(path, square)
        np.testing.assert_array_equal(restored.u1, centred_bump.u1)
        bad = tmp_path / 'bad.csv'
        bad.write_text("x,y\n")
        with pytest.raises(ValidationError, match="Invalid header"):
            read_field_csv(bad, square)
        bad.write_text("i,j,u1,u2\n40,0,1.0,0.0\n")
        with pytest.raises(ValidationError, match="Invalid cell"):
            read_field_csv(bad, square)


class TestVerification:
    """Test the planar inequality checks."""

    def test_field_profile(self, square):
        """Test the rearrangement of a constant field."""
        profile = field_profile(polynomial_field(square, [[1.0], [0.0]]))
        assert profile.L == pytest.approx(1.0)
        assert profile.cumulative(1.0) == pytest.approx(1.0)

    def test_rearrangement_bound(self):
        """Test the bound for chi_(0,1) at s = 1/4 in the plane."""
        assert rearrangement_bound_profile(DecreasingProfile.indicator(1.0), 0.25, 2) == pytest.approx(1.5)

    def test_modular_trivial(self, square):
        """Test zero and rigid fields."""
        assert verify_orlicz_modular(VectorField2D.zeros(square), PowerYoung(1.5)).c == 0.0
        rigid = verify_orlicz_modular(RigidMotion2D((1.0, 0.0)).on(square), PowerYoung(1.5))
        assert not rigid
        assert [entry.kind for entry in rigid.regularizations] == ['rigid-field']

    def test_modular_bump(self, centred_bump):
        """Test a feasible constant exists for a bump."""
        result = verify_orlicz_modular(centred_bump, PowerYoung(1.5))
        assert result.holds and 0.0 < result.c < np.inf
        assert result.field_modular <= result.gradient_modular * (1 + 1e-9)

    def test_sobolev_poincare(self, square):
        """Test rigid fields score zero and disconnected domains are rejected."""
        value = sobolev_poincare_check(RigidMotion2D((0.0, 1.0), 0.5).on(square),
                                       NormSpec.lebesgue(1.0), NormSpec.lebesgue(2.0))
        assert value == 0.0
        mask = np.zeros((16, 16), dtype=bool)
        mask[1:6, 1:6] = True
        mask[9:14, 9:14] = True
        split = GridDomain(16, 16, 1.0 / 16, mask=mask)
        with pytest.raises(DomainError, match="connected components"):
            sobolev_poincare_check(VectorField2D.zeros(split), NormSpec.lebesgue(1.0), NormSpec.lebesgue(2.0))

    def test_sobolev_family(self):
        """Test the refinement study on a small bump family."""
        family = FieldFamily(count=3, resolutions=(32, 64))
        report = verify_sobolev_2d(family, NormSpec.lebesgue(1.0), NormSpec.lebesgue(2.0))
        assert set(report.max_ratio) == {32, 64}
        assert all(0.0 < ratio < np.inf for ratio in report.max_ratio.values())
        assert report.refinement_change >= 0.0
        assert report.growth_slope is None
        assert set(report.to_dict()) >= {'max_ratio', 'refinement_change', 'pointwise_constant'}

    def test_cusp_growth(self):
        """Test the log-cusp family reports a growth slope."""
        family = FieldFamily(kind='log-cusp', resolutions=(64,))
        report = verify_sobolev_2d(family, NormSpec.lebesgue(2.0), NormSpec.lebesgue(float('inf')))
        assert report.growth_slope is not None
        assert report.growth_slope > 0.0
