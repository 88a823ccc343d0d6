import { ApiClient } from "./api.js";
import { ConsoleStore } from "./store.js";
import { ZoneDraft, draftFromZone, validateDraft } from "./validate.js";

// Kinds that change what the road view shows; refresh the snapshot on
// these instead of waiting for the next poll.
const STATE_KINDS = new Set(["governed", "released", "halted",
                             "collision_averted", "config_change"]);

export class ConsoleController {
  drafts = new Map<string, ZoneDraft>();
  errors = new Map<string, Record<string, string>>();

  constructor(private api: ApiClient, readonly store: ConsoleStore) {}

  async init(): Promise<void> {
    await Promise.all([this.loadZones(), this.loadState()]);
  }

  async loadZones(): Promise<void> {
    this.store.setZones(await this.api.getZones());
  }

  async loadState(): Promise<void> {
    this.store.setSim(await this.api.getState());
  }

  refreshAll = async (): Promise<void> => {
    await Promise.all([this.loadZones(), this.loadState()]);
  };

  draftFor(zoneId: string): ZoneDraft | null {
    const existing = this.drafts.get(zoneId);
    if (existing) return existing;
    const zone = this.store.zones.find((z) => z.id === zoneId);
    return zone ? draftFromZone(zone) : null;
  }

  setDraft(zoneId: string, field: keyof ZoneDraft, value: string | boolean): void {
    const draft = this.draftFor(zoneId);
    if (!draft) return;
    this.drafts.set(zoneId, { ...draft, [field]: value } as ZoneDraft);
  }

  // Returns true when the edit was sent; a validation failure stores the
  // inline errors and sends nothing.
  async saveZone(zoneId: string): Promise<boolean> {
    const draft = this.draftFor(zoneId);
    if (!draft) return false;
    const { errors, patch } = validateDraft(draft);
    if (!patch) {
      this.errors.set(zoneId, errors);
      this.store.touch();
      return false;
    }
    this.errors.delete(zoneId);
    const updated = await this.api.putZone(zoneId, patch);
    this.drafts.delete(zoneId);
    this.store.applyZonePatch(updated);
    return true;
  }

  async toggleEmergency(zoneId: string, on: boolean): Promise<void> {
    const updated = await this.api.setEmergency(zoneId, on);
    this.store.applyZonePatch(updated);
  }

  handleEvent = async (index: number, line: string): Promise<void> => {
    const event = this.store.applyEvent(index, line);
    if (!event) return;
    if (event.kind === "config_change") await this.loadZones();
    if (STATE_KINDS.has(event.kind)) await this.loadState();
  };
}
