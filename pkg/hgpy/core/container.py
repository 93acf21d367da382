# -*- coding: utf-8 -*-
"""Result file containers

Trial records are streamed into the currently opened container and a
summary is appended on close. The container type is picked by the name of
a registered file type (json, csv, hdf5).
"""
from __future__ import annotations

import abc
import csv
import json
from typing import Any, Dict, List, Type, Union

import h5py
import numpy as np

from hgpy.definitions import *
import hgpy.core.logger as hglogger

log = hglogger.getLogger(__name__)

# Dictionary of valid file types for result containers
_file_types: Dict[str, Type[ResultFile]] = {}

# Handle of currently opened container
_instance: Union[ResultFile, None] = None


def _noinstance():
    return _instance is None


def register_file_type(type_name: str, type_class):
    _file_types[type_name] = type_class


def file_types() -> List[str]:
    return list(_file_types)


def new(file_type: str, file_path: str) -> ResultFile:
    global _instance, _file_types

    assert file_type in _file_types, f'Unregistered file type {file_type}'

    if not _noinstance():
        _instance.close()

    _instance = _file_types[file_type](file_path)
    return _instance


def add_record(record: Dict[str, Any]):
    if _noinstance():
        return
    _instance.add_record(record)


def set_summary(summary: Dict[str, Any]):
    if _noinstance():
        return
    _instance.set_summary(summary)


def close():
    global _instance

    if _noinstance():
        return

    _instance.close()
    _instance = None


def to_jsonable(value: Any) -> Any:
    """Plain JSON types for numpy scalars, enums, fractions and infinity sentinels"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(v) for v in items]
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if hasattr(value, 'value') and isinstance(getattr(value, 'value'), str):
        return value.value
    return str(value)


def write_document(file_path: str, document: Dict[str, Any]):
    """Write a single JSON document (verify and bench reports)"""
    with open(file_path, 'w', encoding='utf-8') as f:
        json.dump(to_jsonable(document), f, indent=2)
        f.write('\n')
    log.info(f'Wrote {file_path}')


class ResultFile(abc.ABC):

    def __init__(self, file_path: str):
        self._file_path = file_path
        self._summary: Union[Dict[str, Any], None] = None
        log.info(f'Open {self.__class__.__name__} {self._file_path}')

    @property
    def file_path(self) -> str:
        return self._file_path

    @abc.abstractmethod
    def add_record(self, record: Dict[str, Any]):
        pass

    def set_summary(self, summary: Dict[str, Any]):
        self._summary = to_jsonable(summary)

    @abc.abstractmethod
    def close(self):
        pass


class JsonLinesFile(ResultFile):
    """One JSON object per record, the summary object last"""

    def __init__(self, file_path: str):
        ResultFile.__init__(self, file_path)
        self._handle = open(self._file_path, 'w', encoding='utf-8')

    def add_record(self, record: Dict[str, Any]):
        self._handle.write(json.dumps(to_jsonable(record)) + '\n')

    def close(self):
        if self._summary is not None:
            self._handle.write(json.dumps(self._summary) + '\n')
        self._handle.close()
        log.info(f'Closed {self._file_path}')


class CsvFile(ResultFile):
    """Records as CSV rows, the summary in <path>.summary.json"""

    def __init__(self, file_path: str):
        ResultFile.__init__(self, file_path)
        self._handle = open(self._file_path, 'w', encoding='utf-8', newline='')
        self._writer: Union[csv.DictWriter, None] = None

    def add_record(self, record: Dict[str, Any]):
        record = to_jsonable(record)
        if self._writer is None:
            self._writer = csv.DictWriter(self._handle, fieldnames=list(record), lineterminator='\n')
            self._writer.writeheader()
        self._writer.writerow(record)

    def close(self):
        self._handle.close()
        if self._summary is not None:
            write_document(f'{self._file_path}.summary.json', self._summary)
        log.info(f'Closed {self._file_path}')


class H5File(ResultFile):
    """One dataset per record field, the summary as root attributes"""

    def __init__(self, file_path: str):
        ResultFile.__init__(self, file_path)
        self._h5_handle = h5py.File(self._file_path, 'w')
        self._columns: Dict[str, List[Any]] = {}

    def add_record(self, record: Dict[str, Any]):
        for name, value in to_jsonable(record).items():
            # Missing verdicts are stored as -1
            self._columns.setdefault(name, []).append(-1 if value is None else value)

    @staticmethod
    def _add_attributes(grp: h5py.Group, attributes: Dict[str, Any]):
        log.debug(f'Write attributes to group {grp}')
        for attr_name, value in attributes.items():
            if isinstance(value, (dict, list)) or value is None:
                value = json.dumps(value)
            try:
                grp.attrs[attr_name] = value
            except (TypeError, ValueError):
                log.warning(f'Failed to write attribute {attr_name} to file. Type: {type(value)}')

    def close(self):
        for name, values in self._columns.items():
            if all(isinstance(v, str) for v in values):
                data = np.array(values, dtype=h5py.string_dtype())
            else:
                data = np.asarray(values)
            self._h5_handle.create_dataset(name, data=data)

        if self._summary is not None:
            self._add_attributes(self._h5_handle['/'], self._summary)

        self._h5_handle.close()
        log.info(f'Closed {self._file_path}')


register_file_type(FORMAT_JSON, JsonLinesFile)
register_file_type(FORMAT_CSV, CsvFile)
register_file_type(FORMAT_HDF5, H5File)
