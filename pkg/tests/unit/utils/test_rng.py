"""
Unit tests for seed derivation
"""

from utils.rng import derive_seed, make_rng, spawn_seeds


class TestDeriveSeed:
    """Test suite for derive_seed"""

    def test_deterministic(self):
        """Test the same coordinates give the same seed"""
        assert derive_seed(42, 1, 2, 3) == derive_seed(42, 1, 2, 3)

    def test_coordinates_matter(self):
        """Test distinct coordinates give distinct seeds"""
        seeds = {derive_seed(42, i, j) for i in range(5) for j in range(5)}
        assert len(seeds) == 25

    def test_master_matters(self):
        """Test the master seed separates streams"""
        assert derive_seed(0, 1) != derive_seed(1, 1)

    def test_order_matters(self):
        """Test coordinates are ordered"""
        assert derive_seed(0, 1, 2) != derive_seed(0, 2, 1)

    def test_fits_uint64(self):
        """Test seeds are valid 64-bit unsigned integers"""
        seed = derive_seed(2**63, 7)
        assert 0 <= seed < 2**64

    def test_spawn_matches_derive(self):
        """Test spawn_seeds is derive_seed over a trailing index"""
        assert spawn_seeds(9, 3, 4) == [derive_seed(9, 4, i) for i in range(3)]

    def test_rng_reproducible(self):
        """Test make_rng replays a stream"""
        assert make_rng(5).standard_normal(3).tolist() == make_rng(5).standard_normal(3).tolist()
