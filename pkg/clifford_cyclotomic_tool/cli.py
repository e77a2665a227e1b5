import logging
import sys

import click

from . import main
from .config import configure
from .errors import CcgError, InvariantViolation

FORMATS = click.Choice(['json', 'table', 'yaml'])

format_option = click.option('--format', 'fmt', type=FORMATS, default='json', show_default=True,
                             help='Report format.')
input_option = click.option('-i', '--input', 'source',
                            help='JSON payload: a file path or the JSON text itself.')
level_option = click.option('-n', '--n', 'n', type=int, required=True, help='The level n of zeta_n.')
trials_option = click.option('--trials', type=int, help='Number of random trials (default from config).')
seed_option = click.option('--seed', type=int, help='Random seed (default from config).')


def _emit(producer, fmt, *args, **kwargs):
    """Runs one main function and prints its report; domain errors exit 1, invariant violations exit 2."""
    try:
        report = producer(*args, **kwargs)
    except CcgError as e:
        raise click.ClickException(str(e))
    except InvariantViolation as e:
        click.secho(f"Invariant violated: {e}", fg='red', err=True)
        sys.exit(2)
    click.echo(main.render(report, fmt))
    return report


class CcgGroup(click.Group):
    """Usage errors exit with status 1 like domain errors; status 2 means an invariant violation."""

    def main(self, *args, **kwargs):
        kwargs['standalone_mode'] = False
        try:
            return super().main(*args, **kwargs)
        except click.ClickException as e:
            e.show()
            sys.exit(1)
        except click.Abort:
            click.secho("Aborted!", fg='red', err=True)
            sys.exit(1)


@click.group(cls=CcgGroup)
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False),
              help='YAML file overriding the bundled settings.')
@click.option('-v', '--verbose', count=True, help='Log INFO (-v) or DEBUG (-vv) to stderr.')
def cli(config_path, verbose):
    """Exact arithmetic and group computations for Clifford-cyclotomic gate sets."""
    level = logging.WARNING if verbose == 0 else (logging.INFO if verbose == 1 else logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        configure(config_path)
    except CcgError as e:
        raise click.ClickException(str(e))


@cli.command('ring-check')
@input_option
@click.option('-n', '--n', 'n', type=int, help='Level for a bare rational payload.')
@format_option
def ring_check(source, n, fmt):
    """Checks membership in R_n and R_n^+, positivity and the square class of an element."""
    _emit(main.ring_check, fmt, source, n)


@cli.command('mat-check')
@input_option
@format_option
def mat_check(source, fmt):
    """Reports the group memberships of a 2x2 or 3x3 matrix."""
    _emit(main.mat_check, fmt, source)


@cli.command('ad')
@input_option
@format_option
def ad(source, fmt):
    """Maps an SU2(R_n) matrix to its rotation in SO3(R_n^+)."""
    _emit(main.adjoint_image, fmt, source)


@cli.command('pi')
@input_option
@format_option
def pi(source, fmt):
    """Maps a U2(R_n) matrix to its rotation in SO3(R_n^+)."""
    _emit(main.pi_image, fmt, source)


@cli.command('phi')
@input_option
@format_option
def phi(source, fmt):
    """Computes phi_i, theta_ij and the square-class obstruction of a rotation."""
    _emit(main.phi_report, fmt, source)


@cli.command('lift')
@input_option
@click.option('--u2', is_flag=True, help='Lift to U2 at levels 2^s or 3*2^s instead of SU2.')
@format_option
def lift(source, u2, fmt):
    """Lifts a rotation to SU2(R_n), or reports the obstruction."""
    report = _emit(main.lift_report, fmt, source, u2)
    if not report["lifted"]:
        click.secho("Rotation does not lift to SU2; its square class is nontrivial.", fg='yellow', err=True)


@cli.command('sel')
@level_option
@format_option
def sel(n, fmt):
    """Shows the Selmer rank and the indices c, cbar at a supported level."""
    _emit(main.selmer_report, fmt, n)


@cli.command('chi')
@level_option
@format_option
def chi(n, fmt):
    """Shows the exact Euler characteristics at level n."""
    _emit(main.chi_report, fmt, n)


@cli.command('scan')
@click.option('--max', 'n_max', type=int, default=132, show_default=True, help='Largest level to scan.')
@click.option('--analytic-max', type=int, help='Also check the analytic bound for 136 <= n <= this value.')
@click.option('--workers', type=int, help='Worker processes (default from config).')
@format_option
def scan(n_max, analytic_max, workers, fmt):
    """Compares |chi(SU2(R_n))| with 1/12 - 1/(2n) for every level 4 | n up to --max."""
    report = _emit(main.scan_report, fmt, n_max, workers, analytic_max)
    click.secho(f"{len(report['equalities'])} equalities, {report['strictCount']} strict inequalities.",
                fg='green', err=True)


@cli.command('decide')
@level_option
@format_option
def decide(n, fmt):
    """Decides whether the gate group is all of U2^zeta(R_n)."""
    _emit(main.decide_report, fmt, n)


@cli.command('synth')
@input_option
@click.option('-n', '--n', 'n', type=int, default=8, show_default=True, help='Level for --trials mode.')
@trials_option
@seed_option
@format_option
def synth(source, n, trials, seed, fmt):
    """Synthesizes a gate word for a matrix, or runs seeded round trips when no input is given."""
    if source is None:
        report = _emit(main.synth_round_trips, fmt, n, trials, seed)
        click.secho(f"Verified {report['verified']}/{report['trials']} round trips.", fg='green', err=True)
    else:
        _emit(main.synth_report, fmt, source)


@cli.command('eval-word')
@click.argument('word')
@level_option
@format_option
def eval_word(word, n, fmt):
    """Evaluates a word such as "H T^3 H T" to its exact matrix."""
    _emit(main.eval_word_report, fmt, word, n)


@cli.command('amalgam-nf')
@click.argument('word', required=False)
@click.option('-n', '--n', 'n', type=int, default=12, show_default=True, help='The level n of zeta_n.')
@trials_option
@seed_option
@format_option
def amalgam_nf(word, n, trials, seed, fmt):
    """Normal form of pi(word) in S4 *_D4 D_n, or seeded normal-form checks when no word is given."""
    if word is None:
        report = _emit(main.amalgam_trials, fmt, n, trials, seed)
        click.secho(f"Normal forms agreed with matrix equality on {report['trials']} pairs.",
                    fg='green', err=True)
    else:
        _emit(main.amalgam_nf_report, fmt, word, n)


@cli.command('dreary')
@format_option
def dreary(fmt):
    """Verifies the rotation over Z[sqrt21, 1/2] that lies outside the image of PU2."""
    _emit(main.dreary_report, fmt)
    click.secho("All dreary example checks hold.", fg='green', err=True)


if __name__ == '__main__':
    cli()
