from .campaigns import CAMPAIGN_RUNNERS, CampaignOutput, PlotRow, resolve_device
from .config import CAMPAIGNS, CampaignConfig, ConfigError
from .output import emit_plot_data, panel_csv, read_panel_csv, write_outputs


def run_campaign(config: CampaignConfig, out_dir=None) -> CampaignOutput:
    """Run one campaign and write its results, plot CSVs and manifest."""
    result = CAMPAIGN_RUNNERS[config.campaign](config)
    write_outputs(config, result, out_dir if out_dir is not None else config.out)
    return result
