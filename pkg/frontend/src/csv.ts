/** Parsing for the simulation CSV schema: a `t` column first, then
 * numeric observable columns named `<dynamics>.<observable>`. */

export class CsvError extends Error {}

export class MissingColumnError extends Error {
  readonly column: string;

  constructor(column: string, available: string[]) {
    super(
      `missing required column ${JSON.stringify(column)}; ` +
        `available columns: ${available.join(", ")}`,
    );
    this.column = column;
  }
}

export interface Table {
  names: string[];
  columns: Map<string, number[]>;
  rows: number;
}

export function parseCsv(text: string): Table {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new CsvError("empty CSV: no header row");
  }
  const names = lines[0].split(",").map((n) => n.trim());
  if (names.length === 0 || names.some((n) => n === "")) {
    throw new CsvError("malformed CSV header");
  }
  if (lines.length === 1) {
    throw new CsvError("empty CSV: header but no data rows");
  }
  const columns = new Map<string, number[]>(names.map((n) => [n, []]));
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== names.length) {
      throw new CsvError(
        `row ${i} has ${cells.length} cells, expected ${names.length}`,
      );
    }
    for (let j = 0; j < names.length; j++) {
      columns.get(names[j])!.push(Number(cells[j]));
    }
  }
  return { names, columns, rows: lines.length - 1 };
}

/** Exact-name lookup; throws a named-column diagnostic when absent. */
export function requireColumn(table: Table, name: string): number[] {
  const col = table.columns.get(name);
  if (col === undefined) {
    throw new MissingColumnError(name, table.names);
  }
  return col;
}

/** All columns whose name ends with `.{suffix}`, keyed by the dynamics
 * prefix; throws when none match. */
export function columnsBySuffix(
  table: Table,
  suffix: string,
): Map<string, number[]> {
  const out = new Map<string, number[]>();
  for (const name of table.names) {
    if (name.endsWith("." + suffix)) {
      out.set(name.slice(0, name.length - suffix.length - 1), table.columns.get(name)!);
    }
  }
  if (out.size === 0) {
    throw new MissingColumnError(`*.${suffix}`, table.names);
  }
  return out;
}
