import json

import h5py
import pytest
import yaml

from hgpy import config
from hgpy.__main__ import main
from hgpy.definitions import *
import hgpy.core.graph as hggraph


@pytest.fixture
def k4_file(tmp_path, k4_incidence):
    path = tmp_path / 'k4.txt'
    hggraph.write_graph(k4_incidence, path)
    return str(path)


@pytest.fixture
def four_cycle_file(tmp_path, four_cycle):
    path = tmp_path / 'c4.txt'
    hggraph.write_graph(four_cycle, path)
    return str(path)


def _statuses(report):
    return {c['check']: c['status'] for c in report['checks']}


def _json_lines(path):
    with open(path) as f:
        return [json.loads(line) for line in f]


def _without_time(rows):
    return [{k: v for k, v in r.items() if k != 'wall_time'} for r in rows]


# gen-graph / build-code

def test_gen_graph_is_reproducible(tmp_path):
    args = ['gen-graph', '--na', '12', '--nb', '9', '--da', '3', '--db', '4', '--seed', '1']
    assert main(args + ['--out', str(tmp_path / 'a.txt')]) == ExitCode.SUCCESS
    assert main(args + ['--out', str(tmp_path / 'b.txt')]) == ExitCode.SUCCESS

    text = (tmp_path / 'a.txt').read_text()
    assert text == (tmp_path / 'b.txt').read_text()
    lines = text.splitlines()
    assert lines[0] == '12 9 3 4'
    assert len(lines) == 13
    assert hggraph.parse_graph(text).is_valid()


def test_gen_graph_to_stdout(capsys):
    assert main(['gen-graph', '--na', '6', '--nb', '4', '--da', '2', '--db', '3', '--seed', '5']) == 0
    assert capsys.readouterr().out.splitlines()[0] == '6 4 2 3'


def test_gen_graph_rejects_inconsistent_degrees():
    assert main(['gen-graph', '--na', '12', '--nb', '9', '--da', '3', '--db', '3']) == ExitCode.USAGE_ERROR


def test_gen_graph_needs_parameters():
    assert main(['gen-graph', '--na', '12']) == ExitCode.USAGE_ERROR


def test_usage_errors():
    assert main([]) == ExitCode.USAGE_ERROR
    assert main(['simulate', '--error-model', 'worst-case']) == ExitCode.USAGE_ERROR


def test_build_code_to_stdout(capsys, k4_file):
    assert main(['build-code', '--graph', k4_file]) == ExitCode.SUCCESS
    header = json.loads(capsys.readouterr().out.splitlines()[-1])
    assert (header['n'], header['k'], header['row_weight']) == (52, 10, 5)


def test_build_code_writes_files(tmp_path, k4_file):
    out = tmp_path / 'code'
    assert main(['build-code', '--graph', k4_file, '--out', str(out)]) == ExitCode.SUCCESS
    with open(f'{out}.json') as f:
        assert json.load(f)['k'] == 10
    assert hggraph.read_graph(f'{out}.graph.txt').n_A == 6


def test_missing_graph_file(tmp_path):
    assert main(['build-code', '--graph', str(tmp_path / 'missing.txt')]) == ExitCode.USAGE_ERROR


# verify

def test_verify_four_cycle(tmp_path, four_cycle_file):
    out = tmp_path / 'verify.json'
    assert main(['verify', '--graph', four_cycle_file, '--random-trials', '20', '--out', str(out)]) == 0
    with open(out) as f:
        report = json.load(f)

    statuses = _statuses(report)
    assert set(statuses.values()) <= {CheckStatus.PASS.value, CheckStatus.NOT_APPLICABLE.value}
    assert statuses['graph_invariants'] == 'pass'
    assert statuses['quantum_distance'] == 'pass'
    assert statuses['critical_generator'] == 'pass'
    assert report['code']['k'] == 2
    assert report['exit_code'] == 0


def test_verify_k4_incidence(tmp_path, k4_file):
    out = tmp_path / 'verify.json'
    args = ['verify', '--graph', k4_file, '--random-trials', '20', '--exhaustive-weight', '1', '--out', str(out)]
    assert main(args) == ExitCode.SUCCESS
    with open(out) as f:
        report = json.load(f)

    statuses = _statuses(report)
    for name in ('graph_invariants', 'unique_neighbor_expansion', 'edge_count_identity', 'classical_distance',
                 'quantum_distance', 'critical_generator', 'syndrome_partition', 'critical_flip',
                 'decoding_guarantee', 'incremental_equivalence'):
        assert statuses[name] == 'pass', name
    assert statuses['syndrome_robustness'] == 'not_applicable'

    distance, decoding = report['certification']
    assert (distance['left']['max_size'], distance['right']['max_size']) == (2, 3)
    assert (decoding['left']['max_size'], decoding['right']['max_size']) == (1, 1)

    checks = {c['check']: c for c in report['checks']}
    assert checks['classical_distance']['detail']['d'] == 3
    assert checks['classical_distance']['detail']['d_T'] == 4

def test_verify_reports_failures_above_w0_per_weight(tmp_path, k4_file):
    out = tmp_path / 'verify.json'
    args = ['verify', '--graph', k4_file, '--checks', 'decoding_guarantee', '--exhaustive-weight', '2',
            '--out', str(out)]
    assert main(args) == ExitCode.SUCCESS
    with open(out) as f:
        report = json.load(f)

    check = {c['check']: c for c in report['checks']}['decoding_guarantee']
    assert check['status'] == 'pass'
    detail = check['detail']
    assert detail['trials'] == 2 * (52 + 1326)
    assert detail['guaranteed_trials'] == 0

    per_weight = detail['beyond_guarantee_failures_per_weight']
    # Single errors are always corrected on this code
    assert set(per_weight) <= {'2'}
    assert all(set(sides) <= {'X', 'Z'} for sides in per_weight.values())
    assert sum(c for sides in per_weight.values() for c in sides.values()) == detail['beyond_guarantee_failures']


def test_verify_saves_effective_configuration(tmp_path, k4_file, restore_config):
    config_path = tmp_path / 'limits.yaml'
    config_path.write_text('VERIFY_MAX_SUBSET_SIZE: 3\n')
    out = tmp_path / 'verify.json'
    args = ['verify', '--graph', k4_file, '-c', str(config_path), '--checks', 'edge_count_identity',
            '--out', str(out)]
    assert main(args) == ExitCode.SUCCESS

    with open(f'{out}.config.yaml') as f:
        saved = yaml.safe_load(f)
    assert saved['VERIFY_MAX_SUBSET_SIZE'] == 3
    assert saved['ORACLE_MAX_ENUMERATION_BITS'] == restore_config.ORACLE_MAX_ENUMERATION_BITS
    assert 'PRESERVED_ORDER' not in saved



def test_verify_selected_checks(capsys, k4_file):
    assert main(['verify', '--graph', k4_file, '--checks', 'edge_count_identity,classical_distance']) == 0
    report = json.loads(capsys.readouterr().out)
    assert [c['check'] for c in report['checks']] == ['graph_invariants', 'edge_count_identity',
                                                      'classical_distance']


def test_verify_unknown_check(k4_file):
    assert main(['verify', '--graph', k4_file, '--checks', 'everything']) == ExitCode.USAGE_ERROR


def test_verify_corrupted_graph(tmp_path):
    path = tmp_path / 'bad.txt'
    path.write_text('2 2 2 2\n0 1\n0 0\n')
    out = tmp_path / 'verify.json'
    assert main(['verify', '--graph', str(path), '--out', str(out)]) == ExitCode.CHECK_FAILURE
    with open(out) as f:
        report = json.load(f)

    invariants = report['checks'][0]
    assert invariants['check'] == 'graph_invariants'
    assert invariants['status'] == 'fail'
    assert invariants['witnesses']
    assert all(c['status'] == 'not_applicable' for c in report['checks'][1:])
    assert report['code'] is None


def test_verify_infeasible_expansion(tmp_path, k4_file, restore_config):
    config_path = tmp_path / 'tiny.yaml'
    config_path.write_text('EXPANSION_MAX_SUBSETS: 1\n')
    out = tmp_path / 'verify.json'
    args = ['verify', '--graph', k4_file, '-c', str(config_path), '--random-trials', '5',
            '--exhaustive-weight', '1', '--out', str(out)]
    assert main(args) == ExitCode.INFEASIBLE
    with open(out) as f:
        statuses = _statuses(json.load(f))
    assert statuses['unique_neighbor_expansion'] == 'skipped_infeasible'
    assert 'fail' not in statuses.values()


# simulate

def test_simulate_weight_zero(tmp_path, k4_file):
    out = tmp_path / 'sim.jsonl'
    assert main(['simulate', '--graph', k4_file, '--weights', '0', '--trials', '5', '--out', str(out)]) == 0
    rows = _json_lines(out)
    records, summary = rows[:-1], rows[-1]
    assert len(records) == 5
    assert all(r['success'] and r['iterations'] == 0 for r in records)
    assert summary['kind'] == 'summary'
    assert summary['per_weight'] == [{'weight': 0, 'trials': 5, 'success_rate': 1.0, 'correct_rate': 1.0}]

def test_simulate_saves_effective_configuration(tmp_path, k4_file):
    out = tmp_path / 'sim.jsonl'
    assert main(['simulate', '--graph', k4_file, '--weights', '1', '--trials', '2', '--out', str(out)]) == 0
    with open(f'{out}.config.yaml') as f:
        saved = yaml.safe_load(f)
    assert saved['SIM_TRIALS_PER_WEIGHT'] == config.SIM_TRIALS_PER_WEIGHT
    assert saved['LOG_LEVEL'] == config.LOG_LEVEL



def test_simulate_is_reproducible(tmp_path, k4_file):
    args = ['simulate', '--graph', k4_file, '--weights', '1-4', '--trials', '5', '--seed', '17']
    assert main(args + ['--out', str(tmp_path / 'a.jsonl')]) == 0
    assert main(args + ['--out', str(tmp_path / 'b.jsonl'), '--threads', '2']) == 0
    a = _json_lines(tmp_path / 'a.jsonl')[:-1]
    b = _json_lines(tmp_path / 'b.jsonl')[:-1]
    assert _without_time(a) == _without_time(b)


def test_simulate_exhaustive_single_errors(tmp_path, k4_file):
    out = tmp_path / 'sim.jsonl'
    args = ['simulate', '--graph', k4_file, '--weights', '1', '--error-model', 'exhaustive-up-to-weight',
            '--delta-a', '0.16', '--delta-b', '0.16', '--certify-size', '5', '--out', str(out)]
    assert main(args) == ExitCode.SUCCESS
    rows = _json_lines(out)
    records, summary = rows[:-1], rows[-1]
    assert len(records) == 52
    assert all(r['correctly_decoded'] for r in records)
    assert summary['w0_status'] == 'certified'
    assert summary['w0'] == pytest.approx(1 / 12)


def test_simulate_certify_needs_deltas(tmp_path, k4_file):
    args = ['simulate', '--graph', k4_file, '--certify-size', '3', '--out', str(tmp_path / 'x.jsonl')]
    assert main(args) == ExitCode.USAGE_ERROR


def test_simulate_k0_code(tmp_path, single_edge):
    graph = tmp_path / 'edge.txt'
    hggraph.write_graph(single_edge, graph)
    out = tmp_path / 'sim.jsonl'
    assert main(['simulate', '--graph', str(graph), '--weights', '1', '--trials', '3', '--out', str(out)]) == 0
    rows = _json_lines(out)
    assert all(r['correctly_decoded'] is None for r in rows[:-1])
    assert rows[-1]['decoding_success_trials'] is False


def test_simulate_csv(tmp_path, k4_file):
    out = tmp_path / 'sim.csv'
    args = ['simulate', '--graph', k4_file, '--weights', '1,2', '--trials', '3', '--format', 'csv', '--out', str(out)]
    assert main(args) == 0
    lines = out.read_text().splitlines()
    assert lines[0].split(',')[:3] == ['trial_id', 'weight', 'support_hash']
    assert len(lines) == 7
    with open(f'{out}.summary.json') as f:
        assert json.load(f)['trials'] == 6


def test_simulate_hdf5(tmp_path, k4_file):
    out = tmp_path / 'sim.h5'
    args = ['simulate', '--graph', k4_file, '--weights', '2', '--trials', '4', '--format', 'hdf5', '--out', str(out)]
    assert main(args) == 0
    with h5py.File(out, 'r') as f:
        assert list(f['trial_id'][:]) == [0, 1, 2, 3]
        assert list(f['weight'][:]) == [2, 2, 2, 2]
        assert int(f.attrs['trials']) == 4
        assert json.loads(f.attrs['per_weight'])[0]['weight'] == 2


def test_simulate_weight_above_n(tmp_path, four_cycle_file):
    args = ['simulate', '--graph', four_cycle_file, '--weights', '9', '--out', str(tmp_path / 'x.jsonl')]
    assert main(args) == ExitCode.USAGE_ERROR


# bench

def test_bench(tmp_path):
    out = tmp_path / 'bench.json'
    args = ['bench', '--sizes', '6,12', '--da', '2', '--db', '3', '--weight', '2', '--trials', '3',
            '--seed', '4', '--out', str(out)]
    assert main(args) == ExitCode.SUCCESS
    with open(out) as f:
        report = json.load(f)
    assert [row['n'] for row in report['sizes']] == [52, 208]
    for row in report['sizes']:
        assert row['shadow_equal'] and row['trace_equal']
        assert row['fixed']['weight'] == 2
        assert row['fixed']['mean_evaluations'] > 0


def test_bench_rejects_fractional_right_side():
    assert main(['bench', '--sizes', '5', '--da', '2', '--db', '3']) == ExitCode.USAGE_ERROR
