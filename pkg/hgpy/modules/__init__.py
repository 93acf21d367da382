from hgpy.modules.construct import cmd_build_code, cmd_gen_graph
from hgpy.modules.verifier import cmd_verify
from hgpy.modules.simulator import cmd_simulate
from hgpy.modules.bench import cmd_bench
