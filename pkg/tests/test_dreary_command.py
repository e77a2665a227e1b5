"""
Tests for the 'ccg dreary' command.
"""
cli = None


class TestDrearyCommand:
    """Test cases for the 'ccg dreary' command."""

    def test_all_checks_hold(self, runner):
        """Every verdict of the example is true."""
        result = runner.invoke(cli, ['dreary'])

        assert result.exit_code == 0
        verdicts = result.json()["verdicts"]
        assert verdicts["tq_in_so3"] is True
        assert verdicts["entries_in_z_sqrt21_half"] is True
        assert verdicts["mq_mq_dagger_is_u"] is True
        assert verdicts["u_nonsquare"] is True
        assert all(verdicts.values())
        assert "All dreary example checks hold." in result.output

    def test_matrices_are_reported(self, runner):
        """T_q lives at level 21 and M_q at level 84."""
        result = runner.invoke(cli, ['dreary'])

        report = result.json()
        assert report["tq"]["n"] == 21
        assert report["mq"]["n"] == 84
        assert len(report["tq"]["rows"]) == 3
