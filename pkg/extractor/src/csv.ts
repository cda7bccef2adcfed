/**
 * Minimal RFC 4180 CSV reader/writer.
 *
 * The raw review exports carry quoted fields with embedded commas, quotes
 * and newlines, so a naive split would mangle them.
 */

export interface CsvTable {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): string[][] {
  const rows: string[][] = [];
  let row: string[] = [];
  let field = "";
  let inQuotes = false;
  let i = 0;

  const pushField = () => {
    row.push(field);
    field = "";
  };
  const pushRow = () => {
    pushField();
    rows.push(row);
    row = [];
  };

  while (i < text.length) {
    const ch = text[i];
    if (inQuotes) {
      if (ch === '"') {
        if (text[i + 1] === '"') {
          field += '"';
          i += 2;
          continue;
        }
        inQuotes = false;
        i += 1;
        continue;
      }
      field += ch;
      i += 1;
      continue;
    }
    if (ch === '"') {
      inQuotes = true;
      i += 1;
    } else if (ch === ",") {
      pushField();
      i += 1;
    } else if (ch === "\r" && text[i + 1] === "\n") {
      pushRow();
      i += 2;
    } else if (ch === "\n" || ch === "\r") {
      pushRow();
      i += 1;
    } else {
      field += ch;
      i += 1;
    }
  }
  if (field !== "" || row.length > 0) {
    pushRow();
  }
  return rows;
}

export function parseCsvWithHeader(text: string): CsvTable {
  const rows = parseCsv(text);
  if (rows.length === 0) {
    throw new Error("empty CSV: no header row");
  }
  const [header, ...rest] = rows;
  return { header, rows: rest };
}

export function csvField(value: string): string {
  if (/[",\r\n]/.test(value)) {
    return '"' + value.replace(/"/g, '""') + '"';
  }
  return value;
}
