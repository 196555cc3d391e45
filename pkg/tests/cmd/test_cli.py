"""
>>> pytest tests/cmd/test_cli.py
"""
import json

from vomasim.cmd.main import exit_code, main
from vomasim.data_structure.models import ValidationReport
from vomasim.models import spec_path

WOLFSHEEP_SPEC = str(spec_path('wolfsheep.vomas'))
RESEARCHERS_SPEC = str(spec_path('researchers.vomas'))
LONELY_WOLF = ['-p', 'n_sheep=0', '-p', 'n_wolves=1', '-p', 'initial_energy=3', '-p', 'wolf_repro=0']


def _run(out, *extra):
    return main(['run', '--model', 'wolfsheep', '--spec', WOLFSHEEP_SPEC, '--out', str(out), '--quiet', *extra])


def _report(out) -> ValidationReport:
    (path,) = out.glob('*.report')
    return ValidationReport.model_validate(json.loads(path.read_text(encoding='utf-8')))


def test_halted_run_exits_with_violations(tmp_path):
    code = _run(tmp_path, '--ticks', '10', '--seed', '42', *LONELY_WOLF)
    assert code == 3, f'exit code {code}'
    report = _report(tmp_path)
    assert (report.status, report.halted_at, report.final_tick) == ('Halted', 3, 3)


def test_clean_run_exits_zero(tmp_path):
    code = main(['run', '--model', 'researchers', '--ticks', '5', '--out', str(tmp_path), '--quiet'])
    assert code == 0
    assert _report(tmp_path).status == 'Completed'


def test_config_file_and_param_precedence(tmp_path):
    config = tmp_path / 'wolf.cfg'
    config.write_text('# lonely wolf\nn_sheep = 0\nn_wolves = 5\ninitial_energy = 3\nwolf_repro = 0\n', encoding='utf-8')
    out = tmp_path / 'out'
    code = _run(out, '--ticks', '10', '--config', str(config), '-p', 'n_wolves=1')
    assert code == 3
    (trace,) = out.glob('*.trace')
    spawns = [json.loads(line) for line in trace.read_text(encoding='utf-8').splitlines()][0]
    assert spawns['name'] == 'spawn' and len(spawns['agents']) == 1, '--param overrides the config file'


def test_usage_errors_exit_one(tmp_path):
    bad_spec = tmp_path / 'bad.vomas'
    bad_spec.write_text('watch = 1\n', encoding='utf-8')
    out = tmp_path / 'out'
    assert main(['run', '--model', 'boids', '--out', str(out)]) == 1
    assert main(['run', '--model', 'researchers', '--ticks', '0', '--out', str(out)]) == 1
    assert main(['run', '--model', 'researchers', '-p', 'p_conf=2', '--out', str(out)]) == 1
    assert main(['run', '--model', 'researchers', '-p', 'p_conf', '--out', str(out)]) == 1
    assert main(['run', '--model', 'researchers', '--spec', str(bad_spec), '--out', str(out)]) == 1
    assert main(['run', '--model', 'researchers', '--spec', str(tmp_path / 'none.vomas'), '--out', str(out)]) == 1
    assert main(['sweep', '--model', 'researchers', '-p', 'p_conf=1..0:1', '--out', str(out)]) == 1
    assert main(['launch']) == 1
    assert not out.exists(), 'a usage error created output'


def test_check_reproduces_the_live_report(tmp_path, capsys):
    assert _run(tmp_path, '--ticks', '10', '--seed', '7', '--full-state', *LONELY_WOLF) == 3
    (trace,) = tmp_path.glob('*.trace')
    (report,) = tmp_path.glob('*.report')
    capsys.readouterr()
    assert main(['check', '--trace', str(trace), '--spec', WOLFSHEEP_SPEC]) == 3
    checked = trace.with_suffix('.check')
    assert checked.read_text(encoding='utf-8') == report.read_text(encoding='utf-8')
    assert 'wolves_alive' in capsys.readouterr().out


def test_check_errors(tmp_path):
    assert main(['check', '--trace', str(tmp_path / 'missing.trace'), '--spec', WOLFSHEEP_SPEC]) == 2
    assert _run(tmp_path, '--ticks', '3') in (0, 3)
    (trace,) = tmp_path.glob('*.trace')
    assert main(['check', '--trace', str(trace), '--spec', WOLFSHEEP_SPEC]) == 2, 'no state entries'
    corrupt = tmp_path / 'corrupt.trace'
    corrupt.write_text('{"run_id":\n', encoding='utf-8')
    assert main(['check', '--trace', str(corrupt), '--spec', WOLFSHEEP_SPEC]) == 2


def test_report_tabulates_runs(tmp_path, capsys):
    assert main(['report', '--out', str(tmp_path)]) == 1, 'no reports yet'
    for seed in ('1', '2'):
        args = ['run', '--model', 'researchers', '--spec', RESEARCHERS_SPEC, '--ticks', '4', '--seed', seed]
        main([*args, '--out', str(tmp_path), '--quiet'])
    capsys.readouterr()
    assert main(['report', '--out', str(tmp_path)]) == 0
    summary = (tmp_path / 'summary.txt').read_text(encoding='utf-8')
    run_ids = sorted(path.stem for path in tmp_path.glob('*.report'))
    assert all(run_id in summary for run_id in run_ids)
    assert summary.index(run_ids[0]) < summary.index(run_ids[1]), 'rows are sorted by run id'
    assert 'total_pubs' in summary
    assert capsys.readouterr().out.strip(), 'the table goes to standard output'
    main(['report', '--out', str(tmp_path)])
    assert (tmp_path / 'summary.txt').read_text(encoding='utf-8') == summary


def test_sweep_command(tmp_path):
    args = ['sweep', '--model', 'researchers', '--ticks', '3', '--seeds', '2', '-p', 'p_conf=0.1..0.3:0.1']
    code = main([*args, '--jobs', '1', '--out', str(tmp_path), '--quiet'])
    assert code == 0
    lines = (tmp_path / 'sweep.summary').read_text(encoding='utf-8').splitlines()
    assert [json.loads(line)['point'] for line in lines] == [{'p_conf': 0.1}, {'p_conf': 0.2}, {'p_conf': 0.3}]
    assert len(list(tmp_path.glob('*.report'))) == 6


def test_exit_code():
    base = dict(run_id='r', model='m', final_tick=1)
    assert exit_code(ValidationReport(status='Completed', **base)) == 0
    violations = [{'invariant': 'i', 'tick': 1, 'scope': 'EveryTick'}]
    assert exit_code(ValidationReport(status='Halted', violations=violations, **base)) == 3
    assert exit_code(ValidationReport(status='Aborted', **base)) == 2


def test_malformed_config_file_exits_one(tmp_path):
    out = tmp_path / 'out'
    for name, text in (('nokey.cfg', 'p_conf 0.3\n'), ('section.cfg', '[researchers]\np_conf = 0.3\n')):
        config = tmp_path / name
        config.write_text(text, encoding='utf-8')
        assert main(['run', '--model', 'researchers', '--config', str(config), '--out', str(out), '--quiet']) == 1
        assert main(['sweep', '--model', 'researchers', '--config', str(config), '--out', str(out), '--quiet']) == 1
    assert not out.exists()


def test_log_path_receives_the_log(tmp_path):
    from vomasim.utils import setup_logger

    log_path = tmp_path / 'run.log'
    args = ['run', '--model', 'researchers', '--ticks', '5', '--out', str(tmp_path / 'out'), '--quiet']
    try:
        code = main([*args, '--log-path', str(log_path)])
    finally:
        setup_logger(level='INFO')
    assert code == 0
    text = log_path.read_text(encoding='utf-8')
    assert 'model=researchers' in text and 'Completed at tick 5' in text
