# -*- coding: utf-8 -*-
"""Trial worker pool

Each worker process rebuilds the code from the base graph once, owns its
own decoders and runs the trials it is handed. Records are merged by trial
id, so the pool size never changes the output.
"""
from __future__ import annotations

import multiprocessing as mp
from typing import Any, Dict, Iterable, List, Union

import hgpy.configuration
import hgpy.core.code as hgcode
import hgpy.core.graph as hggraph
import hgpy.core.logger as hglogger
import hgpy.core.trial as hgtrial

log = hglogger.getLogger(__name__)

# Trial runner of the current worker process
_runner: Union[hgtrial.TrialRunner, None] = None


def _init_worker(graph: hggraph.BipartiteGraph, cfg: hgtrial.TrialConfig, k: int,
                 log_queue, config_data: Dict[str, Any]):
    global _runner

    # Set up logging
    hglogger.setup_log_queue(log_queue)
    hglogger.add_handlers()

    hgpy.configuration.set_configuration_data(config_data)

    _runner = hgtrial.TrialRunner(hgcode.CssCode(graph), cfg, k)
    log.debug(f'Worker {mp.current_process().name} ready')


def _run_one(spec: hgtrial.TrialSpec) -> hgtrial.TrialRecord:
    return _runner.run(spec)


def run_trials(C: hgcode.CssCode, cfg: hgtrial.TrialConfig, specs: Iterable[hgtrial.TrialSpec],
               threads: int = 1, k: int = None, chunksize: int = 16) -> List[hgtrial.TrialRecord]:
    """Run trials inline (threads <= 1) or on a process pool, sorted by trial id"""
    if k is None:
        k = hgcode.code_dimension(C)

    if threads <= 1:
        runner = hgtrial.TrialRunner(C, cfg, k)
        records = [runner.run(spec) for spec in specs]
    else:
        log.info(f'Start pool of {threads} workers')
        log_queue = hglogger.start_queue_listener()
        config_data = hgpy.configuration.get_configuration_data()
        try:
            with mp.Pool(threads, initializer=_init_worker,
                         initargs=(C.graph, cfg, k, log_queue, config_data)) as pool:
                records = pool.map(_run_one, list(specs), chunksize=chunksize)
        finally:
            hglogger.stop_queue_listener()

    records.sort(key=lambda r: r.trial_id)
    log.info(f'Finished {len(records)} trials')
    return records
