"""
Tests for the 'ccg synth' and 'ccg eval-word' commands.
"""
from clifford_cyclotomic_tool import matrices as mat
from clifford_cyclotomic_tool import synthesis as syn
cli = None
from .test_utils import matrix_payload


class TestSynthCommand:
    """Test cases for the 'ccg synth' command."""

    def test_synthesize_a_matrix(self, runner):
        """The reported word evaluates back to the input."""
        u = syn.eval_word(syn.parse_word("H T^3 H T H T^6", 8))
        result = runner.invoke(cli, ['synth', '--input', matrix_payload(u)])

        assert result.exit_code == 0
        report = result.json()
        assert report["n"] == 8
        assert syn.eval_word(syn.parse_word(report["word"], 8)) == u
        assert report["hCount"] == report["word"].split().count("H")

    def test_round_trip_trials(self, runner):
        """Seeded trials at level 8 all verify."""
        result = runner.invoke(cli, ['synth', '--trials', '3', '--seed', '1'])

        assert result.exit_code == 0
        report = result.json()
        assert (report["trials"], report["seed"]) == (3, 1)
        assert report["verified"] == 3
        assert report["unsynthesized"] == 0
        assert "Verified 3/3 round trips." in result.output

    def test_trials_are_seeded(self, runner):
        """The same seed gives the same report."""
        first = runner.invoke(cli, ['synth', '--trials', '2', '--seed', '7'])
        second = runner.invoke(cli, ['synth', '--trials', '2', '--seed', '7'])

        assert first.stdout == second.stdout

    def test_not_unitary(self, runner):
        """diag(2, 1) exits with status 1."""
        result = runner.invoke(cli, ['synth', '--input', matrix_payload(mat.UMat.diagonal(8, [2, 1]))])

        assert result.exit_code == 1
        assert "Error" in result.output


class TestEvalWordCommand:
    """Test cases for the 'ccg eval-word' command."""

    def test_bit_flip(self, runner):
        """H T^4 H = i X has determinant 1 and two H(zeta^j) factors."""
        result = runner.invoke(cli, ['eval-word', 'H T^4 H', '--n', '8'])

        assert result.exit_code == 0
        report = result.json()
        assert report["word"] == "H T^4 H"
        assert report["detPower"] == 0
        assert len(report["hzWord"]) == 2
        assert mat.from_json(report["matrix"]) == mat.gate_X(8) * mat.imaginary_unit(8)

    def test_phase_word(self, runner):
        """T has no H(zeta^j) rewriting."""
        result = runner.invoke(cli, ['eval-word', 'T', '--n', '12'])

        assert result.exit_code == 0
        report = result.json()
        assert report["detPower"] == 1
        assert "hzWord" not in report

    def test_bad_token(self, runner):
        """Unknown gates are rejected."""
        result = runner.invoke(cli, ['eval-word', 'H S', '--n', '8'])

        assert result.exit_code == 1
        assert "Unknown gate token" in result.output

    def test_level_without_i(self, runner):
        """Level 6 has no Hadamard gate."""
        result = runner.invoke(cli, ['eval-word', 'H', '--n', '6'])

        assert result.exit_code == 1
