from pda_pow.config import config_class
from pda_pow.tools.common import SystemRunnableConfig


@config_class()
class ReduceInfoConfig(SystemRunnableConfig):
    """
    Print the size of the standard and reduced state spaces for `--n` and `--k`, as json.
    """

    def run(self):
        import json

        from pda_pow.reduction.reduction import reduction_info

        self.write_output(json.dumps(reduction_info(self.system.n, self.system.k)))


if __name__ == "__main__":
    ReduceInfoConfig.parse_and_run()
